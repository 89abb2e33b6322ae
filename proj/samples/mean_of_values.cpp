// Estimates the mean of the numbers given on the command line, exactly and
// from 8192 shots.

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "qmean/qmean.hpp"

int main(int argc, char** argv) {
  std::vector<double> raw;
  for (int i = 1; i < argc; ++i) raw.push_back(std::strtod(argv[i], nullptr));
  if (raw.empty()) raw.assign(qmean::experiments::kExperiment1.begin(), qmean::experiments::kExperiment1.end());

  const qmean::Dataset ds = qmean::rescale(raw);
  const double truth = qmean::classical_mean(ds);
  const auto exact = qmean::estimate_mean_exact(ds, truth);
  const auto sampled = qmean::estimate_mean(ds, 8192, 1, truth);

  std::printf("classical mean   %.10f\n", truth);
  std::printf("exact |mean|     %.10f\n", exact.magnitude);
  std::printf("sampled |mean|   %.10f  (%llu / 8192 ones)\n", sampled.magnitude,
              static_cast<unsigned long long>(sampled.ones_count));
  std::printf("signed (exact)   %.10f\n", qmean::resolve_sign_exact(ds));
  return 0;
}
