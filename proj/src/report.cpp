#include "uclab/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>

namespace uclab {

namespace {

bool decide(double measured, double bound, double tol, Sense sense) {
    if (!std::isfinite(measured)) return false;
    return sense == Sense::AtMost ? measured <= bound + tol : measured >= bound - tol;
}

nlohmann::json number(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

}  // namespace

CheckEntry& VerificationReport::add(std::string id, std::string anchor, double measured, double bound,
                                    double tolerance, Sense sense, std::string note) {
    CheckEntry e;
    e.id = std::move(id);
    e.anchor = std::move(anchor);
    e.measured = measured;
    e.bound = bound;
    e.tolerance = tolerance;
    e.sense = sense;
    e.pass = decide(measured, bound, tolerance, sense);
    e.note = std::move(note);
    entries_.push_back(std::move(e));
    return entries_.back();
}

CheckEntry& VerificationReport::add_flag(std::string id, std::string anchor, bool pass, double measured,
                                         std::string note) {
    CheckEntry e;
    e.id = std::move(id);
    e.anchor = std::move(anchor);
    e.measured = measured;
    e.bound = pass ? 1.0 : 0.0;
    e.pass = pass;
    e.note = std::move(note);
    entries_.push_back(std::move(e));
    return entries_.back();
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix) {
    for (auto e : other.entries_) {
        if (!prefix.empty()) e.id = prefix + "/" + e.id;
        entries_.push_back(std::move(e));
    }
}

const CheckEntry* VerificationReport::find(const std::string& id) const {
    for (const auto& e : entries_)
        if (e.id == id) return &e;
    return nullptr;
}

bool VerificationReport::all_pass() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const CheckEntry& e) { return e.pass; });
}

std::size_t VerificationReport::failures() const {
    return std::count_if(entries_.begin(), entries_.end(), [](const CheckEntry& e) { return !e.pass; });
}

nlohmann::json VerificationReport::to_json() const {
    std::vector<const CheckEntry*> sorted;
    for (const auto& e : entries_) sorted.push_back(&e);
    std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });
    nlohmann::json arr = nlohmann::json::array();
    for (const auto* e : sorted) {
        nlohmann::json j;
        j["id"] = e->id;
        j["anchor"] = e->anchor;
        j["measured"] = number(e->measured);
        j["bound"] = number(e->bound);
        j["tolerance"] = number(e->tolerance);
        j["sense"] = e->sense == Sense::AtMost ? "at_most" : "at_least";
        j["pass"] = e->pass;
        if (!e->note.empty()) j["note"] = e->note;
        arr.push_back(std::move(j));
    }
    return arr;
}

nlohmann::json report_document(const VerificationReport& report, unsigned seed, bool with_timestamp) {
    nlohmann::json doc;
    doc["metadata"]["version"] = "1.0.0";
    doc["metadata"]["seed"] = seed;
    if (with_timestamp) {
        auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        doc["metadata"]["timestamp"] = buf;
    }
    doc["summary"]["checks"] = report.entries().size();
    doc["summary"]["failures"] = report.failures();
    doc["summary"]["pass"] = report.all_pass();
    doc["entries"] = report.to_json();
    return doc;
}

}  // namespace uclab
