// Built-in data sets for the two reference experiments.

#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>

namespace qmean::experiments {

inline constexpr std::array<double, 4> kExperiment1 = {0.836, -0.549, 0.615, 0.053};

// Same digits as data/experiment2.csv.
inline constexpr std::array<double, 64> kExperiment2 = {
    0.22495386795899458, 0.6472769072293065, 0.709038451287777,
    -0.5970796556344883, 0.07235611518784857, 0.27535441361958535,
    0.23405415872037216, -0.6132848510586444, 0.815838325977364,
    0.9862339892282083, 0.9781021068377187, 0.9026951005347351,
    0.05552000071686125, -0.3178090994326095, 0.09729156609423062,
    0.8698275786345279, 0.6760137968713027, -0.21776715526389767,
    0.8029093088538057, -0.25104309810068315, 0.6557036097200717,
    0.8682014099413626, -0.1920455020733478, -0.8905475758666307,
    0.23031742804316113, 0.9329324998406741, 0.5781468233293475,
    -0.17386244011530716, 0.669209363044652, -0.8385876485402247,
    0.0724538958359131, -0.4173503926375397, 0.5690890246998732,
    -0.857625412618098, 0.32186644578510637, 0.9183878964025863,
    0.7158760767584901, 0.05801120581769359, 0.258594374547069,
    0.12373176242755379, -0.044414759114735414, -0.7339100589130634,
    0.06636156341201288, -0.26474588141090716, 0.5877635730130948,
    0.7657913466078313, 0.0954235152046492, -0.1529304902589007,
    0.3747490078807687, -0.40194124948724586, 0.1268433647717387,
    -0.29283200094197304, 0.09849082135070958, 0.08908499520159507,
    0.20018694857533098, -0.8861796915682355, 0.08889551420495267,
    0.7117261222084111, -0.24912229271552627, -0.9548132647575004,
    0.5756845545184449, -0.6422214313117002, 0.9893829417644175,
    -0.2046396917481068,};

/// Reference values quoted alongside the experiments.
inline constexpr double kExperiment1SampledP1 = 0.05743577075;
inline constexpr double kExperiment1SampledMagnitude = 0.239657611;
inline constexpr double kExperiment1SampledEpsilon = 0.000907611;
inline constexpr double kExperiment2SampledP1 = 0.023715415;
inline constexpr double kExperiment2SampledMagnitude = 0.153998101;
inline constexpr double kExperiment2ClassicalMean = 0.154619033;
inline constexpr unsigned kReferenceShots = 8192;

inline std::span<const double> builtin(int id) {
  switch (id) {
    case 1: return kExperiment1;
    case 2: return kExperiment2;
    default: throw std::invalid_argument("unknown experiment " + std::to_string(id) + " (expected 1 or 2)");
  }
}

}  // namespace qmean::experiments
