#include "dgff/verify.hpp"

#include <ostream>

#include "dgff/errors.hpp"

namespace dgff {

std::string format_criterion_line(const CriterionResult& result) {
  std::string line = "criterion ";
  if (result.index < 10) line += '0';
  line += std::to_string(result.index);
  line += result.pass ? " [PASS] " : " [FAIL] ";
  line += result.name;
  line += ": ";
  line += result.detail;
  return line;
}

bool run_verify(const std::string& suite, std::uint64_t seed, int threads,
                std::ostream& out) {
  if (suite != "fast" && suite != "full")
    throw ConfigInvalid("verify suite must be 'fast' or 'full', got '" +
                        suite + "'");
  std::vector<CriterionResult> results = fast_criteria(seed, threads, &out);
  if (suite == "full") {
    std::vector<CriterionResult> rest = full_criteria(seed, threads, &out);
    results.insert(results.end(), rest.begin(), rest.end());
  }
  std::size_t passed = 0;
  for (const CriterionResult& r : results) passed += r.pass ? 1 : 0;
  out << "verify " << suite << ": " << passed << "/" << results.size()
      << " criteria passed (seed " << seed << ")\n";
  return passed == results.size();
}

}  // namespace dgff
