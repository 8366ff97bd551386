#include <codelta/laws.hpp>

#include <cstdio>

int main() {
  codelta::RunConfig cfg;
  cfg.space = codelta::Space::real(3);
  cfg.order = 2;
  cfg.cases = 200;
  cfg.seed = 7;

  codelta::LawReport rep = codelta::check_full_suite(cfg);
  for (const auto& l : rep.laws) {
    std::printf("%-32s %-5s %5d cases %3d failures  max residual %s\n", l.name.c_str(),
                l.anchor.c_str(), l.cases, l.failures, codelta::to_string(l.max_residual).c_str());
  }
  std::printf("%s\n", rep.all_passed() ? "all laws hold" : "LAW FAILURES");
  return rep.all_passed() ? 0 : 1;
}
