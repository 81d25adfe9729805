#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace uclab {

enum class Sense { AtMost, AtLeast };

struct CheckEntry {
    std::string id;
    std::string anchor;
    double measured = 0.0;
    double bound = 0.0;
    double tolerance = 0.0;
    Sense sense = Sense::AtMost;
    bool pass = false;
    std::string note;
};

class VerificationReport {
public:
    // pass is derived: measured <= bound + tolerance (AtMost) or measured >= bound - tolerance (AtLeast).
    CheckEntry& add(std::string id, std::string anchor, double measured, double bound, double tolerance,
                    Sense sense = Sense::AtMost, std::string note = {});
    // Entry whose pass flag is decided by the caller (e.g. a sweep that found no passing point).
    CheckEntry& add_flag(std::string id, std::string anchor, bool pass, double measured = 0.0,
                         std::string note = {});
    void merge(const VerificationReport& other, const std::string& prefix = {});

    const std::vector<CheckEntry>& entries() const { return entries_; }
    const CheckEntry* find(const std::string& id) const;
    bool all_pass() const;
    std::size_t failures() const;

    // Entries are sorted by id so the output is deterministic.
    nlohmann::json to_json() const;

private:
    std::vector<CheckEntry> entries_;
};

nlohmann::json report_document(const VerificationReport& report, unsigned seed, bool with_timestamp = true);

}  // namespace uclab
