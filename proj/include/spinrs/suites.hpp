#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinrs/n2form.hpp"

namespace spinrs {

// the named verification suites exposed by the command line
const std::vector<std::string>& suite_names();
bool is_suite_name(const std::string& name);

// Runs one suite with a master seed (each suite derives its own stream).
// Some suites emit more than one report.
std::vector<VerificationReport> run_suite(const std::string& name, std::uint64_t seed);

// runs the given suites (or all when the list is empty), sorted by suite name
std::vector<VerificationReport> run_suites(std::vector<std::string> names, std::uint64_t seed);

}  // namespace spinrs
