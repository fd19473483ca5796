#pragma once

#include <cstddef>
#include <vector>

namespace convoscope {

// 2x2 table of two raters' binary labels.
struct ContingencyTable {
  std::size_t both_positive = 0;   // a
  std::size_t only_first = 0;      // b: first positive, second negative
  std::size_t only_second = 0;     // c: first negative, second positive
  std::size_t both_negative = 0;   // d

  std::size_t total() const { return both_positive + only_first + only_second + both_negative; }
};

struct AgreementReport {
  double kappa = 0.0;
  double observed_agreement = 0.0;
  double expected_agreement = 0.0;
  std::size_t n_items = 0;
  // Both raters constant and equal (expected agreement 1): kappa reported as 1.
  bool degenerate = false;
};

// Cohen's kappa, chance agreement from the raters' marginal frequencies.
// Throws InvalidInputError for an empty table.
AgreementReport cohens_kappa(const ContingencyTable& table);
// Throws InvalidInputError for unequal lengths or empty input.
AgreementReport cohens_kappa(const std::vector<bool>& first, const std::vector<bool>& second);

}  // namespace convoscope
