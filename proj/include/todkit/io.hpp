#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "todkit/rods.hpp"

namespace todkit {

inline constexpr const char* kReportSchema = "todkit.report/1";
inline constexpr const char* kVersion = "1.0.0";

struct RodFile {
    Mode mode = Mode::ale;
    RodData rods;
    ExactRodData exact;
    bool exact_input = false;  // every number was given as a decimal string
    std::uint64_t hash = 0;    // of the raw text
};

// {"mode": "ale"|"any", "c": ..., "rods": [{"z": ..., "a": ...}],
//  "gauge": {"h_constant": "symmetric" | number}}
RodFile parse_rod_file(const std::string& text);
RodFile load_rod_file(const std::string& path);

std::string rod_file_json(const RodData& rods, Mode mode = Mode::ale);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

std::vector<double> parse_number_list(const std::string& text);

enum class Status { pass, fail, skip };
std::string to_string(Status s);

struct Check {
    std::string name;
    Status status = Status::skip;
    double measured = 0;
    double tolerance = 0;
    std::string location;
    std::string note;
    bool quantitative = true;
};

struct VerificationReport {
    std::string suite;
    std::vector<Check> checks;
    std::string input_hash;
    std::optional<std::uint64_t> seed;

    void add(std::string name, double measured, double tolerance, std::string location = {},
             std::string note = {});
    void add_status(std::string name, Status status, std::string note = {}, std::string location = {});
    int passed() const;
    int failed() const;
    int skipped() const;
    bool ok() const { return failed() == 0; }
    // deterministic: no timestamps, fixed key order, fixed number format
    std::string json() const;
};

// shortest round-tripping decimal
std::string format_double(double v);

}  // namespace todkit
