#pragma once

#include "qmean/circuit.hpp"
#include "qmean/dataset_io.hpp"
#include "qmean/encoding.hpp"
#include "qmean/experiments.hpp"
#include "qmean/mean_circuit.hpp"
#include "qmean/qasm.hpp"
#include "qmean/statevector.hpp"
