#include <zkpcp/harness/criteria.hpp>

#include <iostream>

int main() {
  using namespace zkpcp;
  CriteriaScale sc;
  bool all = true;
  auto cs = all_criteria();
  for (size_t i = 0; i < cs.size(); ++i) {
    Stopwatch sw;
    CriterionResult r{int(i + 1), "criterion", false, ""};
    try {
      r = cs[i](sc);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("threw: ") + e.what();
    }
    all = all && r.pass;
    std::cout << criterion_line(r) << " (" << static_cast<long>(sw.ms() / 1000) << " s)" << std::endl;
  }
  std::cout << (all ? "all criteria passed" : "some criteria failed") << std::endl;
  return all ? 0 : 1;
}
