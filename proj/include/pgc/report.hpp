// Verification reports and JSON serialization for the domain types. All
// JSON uses ordered keys so identical inputs produce byte-identical output;
// wall_time_s is always the final key and is excluded from golden
// comparisons.
#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgc/structure.hpp"

namespace pgc {

using Json = nlohmann::ordered_json;

struct Counterexample {
    int q = 0, n = 0, s = 0;
    std::vector<int> colours;  // pgcol body of the offending colouring
    std::string witness;
};

struct VerificationReport {
    std::string theorem;
    std::string family;
    std::uint64_t instances_checked = 0;
    std::uint64_t violations = 0;
    std::optional<Counterexample> first_counterexample;
    double wall_time_s = 0.0;

    void record_violation(const Colouring& c, const std::string& witness) {
        ++violations;
        if (!first_counterexample) {
            Counterexample ce;
            ce.q = c.g().q();
            ce.n = c.g().n();
            ce.s = c.s;
            ce.colours = c.colours;
            ce.witness = witness;
            first_counterexample = std::move(ce);
        }
    }
};

class WallClock {
public:
    WallClock() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline Json to_json(const Flat& f) { return Json(f.points); }

inline Json to_json(const TargetChain& tc) {
    Json j;
    j["flats"] = Json::array();
    for (const Flat& f : tc.flats) j["flats"].push_back(to_json(f));
    j["layer_colours"] = tc.layer_colours;
    return j;
}

inline Json to_json(const DecompositionSequence& seq) {
    Json j;
    j["parts"] = Json::array();
    for (const FlatColouring& p : seq.parts) {
        Json part;
        part["flat"] = to_json(p.flat);
        part["colours"] = p.colours;
        j["parts"].push_back(std::move(part));
    }
    return j;
}

inline Json to_json(const VerificationReport& r) {
    Json j;
    j["theorem"] = r.theorem;
    j["family"] = r.family;
    j["instances_checked"] = r.instances_checked;
    j["violations"] = r.violations;
    if (r.first_counterexample) {
        const Counterexample& ce = *r.first_counterexample;
        Json c;
        c["q"] = ce.q;
        c["n"] = ce.n;
        c["s"] = ce.s;
        c["colours"] = ce.colours;
        c["witness"] = ce.witness;
        j["first_counterexample"] = std::move(c);
    } else {
        j["first_counterexample"] = nullptr;
    }
    j["wall_time_s"] = r.wall_time_s;
    return j;
}

}  // namespace pgc
