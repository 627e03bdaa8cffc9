#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Batch verification suites. Each runner pins its own grids, sample counts
// and tolerances; the seed only feeds the random samplers.

namespace weylcert::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

CriterionResult legendre_operator_bound();                 // 1
CriterionResult geometric_spectral_agreement(std::uint64_t seed);  // 2
CriterionResult kak_round_trips(std::uint64_t seed);       // 3
CriterionResult wall_identities(std::uint64_t seed);       // 4
CriterionResult sinh_systems(std::uint64_t seed);          // 5
CriterionResult gaussian_witness_suite(std::uint64_t seed);  // 6
CriterionResult certificate_soundness(std::uint64_t seed);   // 7
CriterionResult u2_spectral_properties(std::uint64_t seed);  // 8
CriterionResult obstruction_demo_run();                    // 9

std::vector<CriterionResult> run_all(std::uint64_t seed);

}  // namespace weylcert::verify
