#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinrs/suites.hpp"

namespace spinrs {

enum class SystemKind { rs, spin_rs, n2_leaf };

std::string to_string(SystemKind k);

// One JSON document describing a run.  Complex values are [re, im] pairs;
// the initial data lives in a per-system "state" object.  Unknown keys are
// rejected so typos surface as configuration errors instead of defaults.
struct RunConfig {
    std::string backend = "elliptic";      // elliptic | trigonometric | rational
    cplx omega1{1.0, 0.0};                 // elliptic and trigonometric backends
    cplx omega3{0.0, 1.0};                 // elliptic backend
    cplx eta{0.0, 0.0};
    SystemKind system = SystemKind::rs;

    std::vector<cplx> x;                   // rs / spin-rs positions
    std::vector<cplx> xdot;                // rs velocities ...
    std::vector<cplx> p;                   // ... or rs momenta (exactly one)
    std::vector<cplx> F;                   // spin-rs amplitudes, row-major n x n

    cplx x1, x2, f1, f2;                   // n2-leaf scalars
    std::optional<cplx> z0;                // n2-leaf spectral point ...
    std::optional<cplx> f3;                // ... and/or off-diagonal amplitude

    double t0 = 0.0;
    double t1 = 1.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int sample_count = 101;                // >= 2, endpoints included
    std::uint64_t seed = 1;
    std::string sign_convention = "auto";  // auto | printed | flipped
    std::string w_convention = "odd_combination";

    LatticeSpec lattice() const;
    int particle_count() const;
};

// Both throw std::invalid_argument with a human-readable message on schema,
// range, or consistency violations.  serialize(parse(s)) is canonical: keys
// sorted, doubles printed so they read back bit-identically.
RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& cfg);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// t plus interleaved re/im columns per flat state component, one header row,
// 17 significant digits throughout
std::string trajectory_csv(const Trajectory& tr);
std::string trajectory_json(const Trajectory& tr);
std::string reports_json(const std::vector<VerificationReport>& reports);

// Command drivers shared by the executable and the tests.  Exit-code
// contract: 0 success, 1 configuration/usage error, 2 numerical failure
// (failed suites, solver breakdown, or early pole termination).
int cmd_simulate(const RunConfig& cfg, const std::string& out_dir, std::string* error = nullptr);
int cmd_verify(const std::vector<std::string>& suites, std::uint64_t seed,
               const std::vector<std::pair<std::string, double>>& tolerance_overrides, const std::string& out_dir,
               std::string* error = nullptr);
int cmd_z0(const RunConfig& cfg, std::string& json_out, std::string* error = nullptr);

inline constexpr std::uint64_t kDefaultSeed = 20260818;

}  // namespace spinrs
