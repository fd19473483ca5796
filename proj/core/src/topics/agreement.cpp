#include "convoscope/topics/agreement.hpp"

#include "convoscope/common/errors.hpp"

namespace convoscope {

AgreementReport cohens_kappa(const ContingencyTable& table) {
  const std::size_t n = table.total();
  if (n == 0) throw InvalidInputError("no items to compare");
  const double total = static_cast<double>(n);
  // Integer numerators keep the common rational cases exact.
  const double agree = static_cast<double>(table.both_positive + table.both_negative);
  const double first_pos = static_cast<double>(table.both_positive + table.only_first);
  const double second_pos = static_cast<double>(table.both_positive + table.only_second);
  const double chance_mass = first_pos * second_pos + (total - first_pos) * (total - second_pos);

  AgreementReport report;
  report.n_items = n;
  report.observed_agreement = agree / total;
  report.expected_agreement = chance_mass / (total * total);
  if (chance_mass == total * total) {
    report.degenerate = true;
    report.kappa = 1.0;
    return report;
  }
  report.kappa = (agree * total - chance_mass) / (total * total - chance_mass);
  return report;
}

AgreementReport cohens_kappa(const std::vector<bool>& first, const std::vector<bool>& second) {
  if (first.size() != second.size()) throw InvalidInputError("label sequences differ in length");
  ContingencyTable table;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (first[i] && second[i]) ++table.both_positive;
    else if (first[i]) ++table.only_first;
    else if (second[i]) ++table.only_second;
    else ++table.both_negative;
  }
  return cohens_kappa(table);
}

}  // namespace convoscope
