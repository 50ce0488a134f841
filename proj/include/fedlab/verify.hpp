#pragma once
#include <string>
#include <vector>

namespace fedlab {

struct VerifyInstance {
  std::string description;
  bool pass = false;
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyInstance> instances;
  bool pass() const {
    for (const auto& i : instances)
      if (!i.pass) return false;
    return !instances.empty();
  }
};

// Named suites exposed through the CLI `verify` subcommand.
VerifyReport verify_lemma1();
VerifyReport verify_theorem1();
VerifyReport verify_lemma2();
// bound_scale != 1 deliberately corrupts the bracket (negative-test fixture)
VerifyReport verify_prop2(double bound_scale = 1.0);
VerifyReport verify_lemma3();
VerifyReport verify_appendix_d();
VerifyReport verify_eq13_mc();

VerifyReport run_suite(const std::string& name);

}  // namespace fedlab
