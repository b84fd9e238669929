#include "todkit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace todkit {

using nlohmann::ordered_json;

namespace {

struct Num {
    double value;
    Rational exact;
    bool from_string;
};

Num read_number(const ordered_json& v, const std::string& what) {
    if (v.is_number()) {
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw InvalidInput(what + " is not finite");
        return {d, Rational(d), false};
    }
    if (v.is_string()) {
        Rational q;
        try {
            q = parse_rational(v.get<std::string>());
        } catch (const std::exception& e) {
            throw InvalidInput(what + ": " + e.what());
        }
        return {static_cast<double>(q), q, true};
    }
    throw InvalidInput(what + " must be a number or a decimal string");
}

}  // namespace

RodFile parse_rod_file(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw InvalidInput(std::string("rod file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidInput("rod file must be a JSON object");
    RodFile f;
    f.hash = fnv1a64(text);
    const std::string mode = j.value("mode", std::string("ale"));
    if (mode == "ale") f.mode = Mode::ale;
    else if (mode == "any") f.mode = Mode::any;
    else throw InvalidInput("unknown mode '" + mode + "' (expected \"ale\" or \"any\")");
    if (!j.contains("c")) throw InvalidInput("rod file needs the constant \"c\"");
    if (!j.contains("rods") || !j["rods"].is_array()) throw InvalidInput("rod file needs a \"rods\" array");
    bool all_strings = true;
    const Num c = read_number(j["c"], "c");
    all_strings &= c.from_string;
    f.rods.c = c.value;
    f.exact.c = c.exact;
    int k = 0;
    for (const auto& r : j["rods"]) {
        ++k;
        if (!r.is_object() || !r.contains("z") || !r.contains("a"))
            throw InvalidInput("rod entry " + std::to_string(k) + " needs \"z\" and \"a\"");
        const Num z = read_number(r["z"], "z_" + std::to_string(k));
        const Num a = read_number(r["a"], "a_" + std::to_string(k));
        all_strings &= z.from_string && a.from_string;
        f.rods.nuts.push_back({z.value, a.value});
        f.exact.nuts.push_back({z.exact, a.exact});
    }
    if (j.contains("gauge")) {
        const auto& g = j["gauge"];
        if (!g.is_object()) throw InvalidInput("\"gauge\" must be an object");
        if (g.contains("h_constant")) {
            const auto& h = g["h_constant"];
            if (!(h.is_string() && h.get<std::string>() == "symmetric")) {
                const Num hc = read_number(h, "h_constant");
                f.rods.h_constant = hc.value;
                f.exact.h_constant = hc.exact;
            }
        }
    }
    f.exact_input = all_strings;
    validate(f.rods, f.mode);
    if (f.mode == Mode::ale && f.exact_input) {
        Rational sum = 0;
        for (const auto& n : f.exact.nuts) sum += n.a;
        if (sum != 1) throw InvalidInput("ALE mode requires the weights to sum to 1 (exact sum = " + to_string(sum) + ")");
    }
    return f;
}

RodFile load_rod_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open rod file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_rod_file(ss.str());
}

std::string rod_file_json(const RodData& rods, Mode mode) {
    ordered_json j;
    j["mode"] = mode == Mode::ale ? "ale" : "any";
    j["c"] = rods.c;
    j["rods"] = ordered_json::array();
    for (const auto& n : rods.nuts) j["rods"].push_back({{"z", n.z}, {"a", n.a}});
    if (rods.h_constant) j["gauge"] = {{"h_constant", *rods.h_constant}};
    else j["gauge"] = {{"h_constant", "symmetric"}};
    return j.dump(2);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw InvalidInput("empty entry in number list '" + text + "'");
        const std::string s = item.substr(b, e - b + 1);
        if (s.find('/') != std::string::npos) {
            out.push_back(static_cast<double>(parse_rational(s)));
            continue;
        }
        double v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
            throw InvalidInput("'" + s + "' is not a number");
        out.push_back(v);
    }
    return out;
}

std::string to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::skip: return "skip";
    }
    return "?";
}

void VerificationReport::add(std::string name, double measured, double tolerance, std::string location,
                             std::string note) {
    const Status s = (std::isfinite(measured) && measured <= tolerance) ? Status::pass : Status::fail;
    checks.push_back({std::move(name), s, measured, tolerance, std::move(location), std::move(note)});
}

void VerificationReport::add_status(std::string name, Status status, std::string note, std::string location) {
    checks.push_back({std::move(name), status, 0, 0, std::move(location), std::move(note), false});
}

int VerificationReport::passed() const {
    int k = 0;
    for (const auto& c : checks) k += c.status == Status::pass;
    return k;
}

int VerificationReport::failed() const {
    int k = 0;
    for (const auto& c : checks) k += c.status == Status::fail;
    return k;
}

int VerificationReport::skipped() const {
    int k = 0;
    for (const auto& c : checks) k += c.status == Status::skip;
    return k;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string VerificationReport::json() const {
    ordered_json j;
    j["schema"] = kReportSchema;
    j["suite"] = suite;
    j["status"] = ok() ? "pass" : "fail";
    j["summary"] = {{"pass", passed()}, {"fail", failed()}, {"skip", skipped()}};
    auto& arr = j["checks"] = ordered_json::array();
    for (const auto& c : checks) {
        ordered_json e;
        e["name"] = c.name;
        e["status"] = to_string(c.status);
        if (c.quantitative) {
            // non-finite values are not representable in JSON
            if (std::isfinite(c.measured)) e["measured"] = c.measured;
            else e["measured"] = format_double(c.measured);
            e["tolerance"] = c.tolerance;
        }
        if (!c.location.empty()) e["location"] = c.location;
        if (!c.note.empty()) e["note"] = c.note;
        arr.push_back(std::move(e));
    }
    j["metadata"] = {{"input_hash", input_hash}, {"version", kVersion}};
    if (seed) j["metadata"]["seed"] = *seed;
    return j.dump(2) + "\n";
}

}  // namespace todkit
