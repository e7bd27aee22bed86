/**
 * Problem bundles in, deterministic JSON reports out.
 */
#ifndef XMC_CLI_HPP
#define XMC_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "xmc/json_io.hpp"

namespace xmc {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum class Status { Ok, Violation, ResourceError, InputError };

const char* status_name(Status s);
/// 0 ok, 1 violation, 2 resource-error, 3 input-error.
int exit_code(Status s);

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> budget;
};

struct RunResult {
    Status status = Status::Ok;
    json report;
    std::string summary;  // one human-readable line
};

/// Parses, validates and dispatches one bundle; never throws on user input.
RunResult run_bundle_text(const std::string& text, const RunOverrides& ov = {});
RunResult run_bundle(const json& bundle, const RunOverrides& ov = {});

/// The byte form of a report: two-space indent, sorted keys, trailing newline.
std::string dump_report(const json& report);

/// Re-runs every <name>.bundle.json in dir against <name>.expected.json.
RunResult golden_verify(const std::string& dir, const RunOverrides& ov = {});

/// Line diff with three lines of context.
std::string unified_diff(const std::string& expected, const std::string& actual, const std::string& name);

}  // namespace xmc

#endif
