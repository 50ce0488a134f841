#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "fedlab/config.hpp"
#include "fedlab/verify.hpp"

namespace fedlab {

// File-producing operations behind the CLI; every command writes a
// config echo next to its primary outputs.  `seed` overrides any seed
// key in the config.
void cmd_generate(const Config& cfg, const std::string& out_dir,
                  uint64_t seed);
void cmd_run(const Config& cfg, const std::string& out_dir, uint64_t seed,
             const std::vector<double>& phi_list);
// Returns true when the suite passed; writes a JSON report.
bool cmd_verify(const std::string& suite, const std::string& out_dir);
void cmd_sweep(const Config& cfg, const std::string& out_dir);

std::vector<double> parse_phi_list(const std::string& text);

}  // namespace fedlab
