#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chemoresp/csv.hpp"
#include "chemoresp/errors.hpp"

namespace chemoresp {

// One patient's clinical row. The 11 categorical fields plus age are the
// model features; the timing fields drive labeling only and never reach the
// feature table.
struct ClinicalRecord {
    std::string case_id;
    std::string legal_sex;
    std::string ethnicity;
    std::string race;
    long age_at_event_days = 0;
    std::string molecular_subtype;
    std::string tumor_locations;
    std::string initial_surgery_status;
    std::string metastatic_status;
    std::string metastasis_location;
    std::string chemotherapy_type;
    std::string protocol_name;
    std::string chemotherapy_agents;
    std::optional<long> t_chemo_start;
    std::optional<long> t_chemo_end;
    std::optional<long> t_efs;
    bool has_subsequent_efs = false;
    bool deceased_due_to_illness = false;
};

enum class Outcome : int {
    not_effective = 0,
    effective = 1,
    excluded = 2,
};

// Which labeling rule fired. Cases where the first relapse precedes
// chemotherapy but further events followed are grouped with
// during-or-after (outcome 0).
enum class OutcomeBranch : int {
    deceased = 0,
    no_efs_event = 1,
    efs_before_chemo = 2,
    efs_during_or_after = 3,
    excluded = 4,
};

// Rule order: deceased; no EFS event; EFS before chemotherapy; EFS during or
// after chemotherapy. An EFS exactly at a chemotherapy boundary counts as
// during (outcome 0). Excluded only when the deciding comparison cannot be
// made because a chemotherapy date is missing.
inline OutcomeBranch outcome_branch(const ClinicalRecord& r) {
    if (r.deceased_due_to_illness) return OutcomeBranch::deceased;
    if (!r.t_efs.has_value()) return OutcomeBranch::no_efs_event;
    const long efs = *r.t_efs;
    if (r.t_chemo_start.has_value()) {
        if (efs < *r.t_chemo_start)
            return r.has_subsequent_efs ? OutcomeBranch::efs_during_or_after
                                        : OutcomeBranch::efs_before_chemo;
        return OutcomeBranch::efs_during_or_after; // during or after, end date not needed
    }
    if (r.t_chemo_end.has_value() && efs >= *r.t_chemo_end)
        return OutcomeBranch::efs_during_or_after;
    return OutcomeBranch::excluded;
}

inline Outcome derive_outcome(const ClinicalRecord& r) {
    switch (outcome_branch(r)) {
        case OutcomeBranch::deceased: return Outcome::not_effective;
        case OutcomeBranch::no_efs_event: return Outcome::effective;
        case OutcomeBranch::efs_before_chemo: return Outcome::effective;
        case OutcomeBranch::efs_during_or_after: return Outcome::not_effective;
        case OutcomeBranch::excluded: return Outcome::excluded;
    }
    return Outcome::excluded;
}

struct CohortSummary {
    long deceased = 0;
    long no_efs_event = 0;
    long efs_before_chemo = 0;
    long efs_during_or_after = 0;
    long excluded = 0;
    long effective = 0;
    long not_effective = 0;
    long labeled() const { return effective + not_effective; }
    long total() const { return labeled() + excluded; }
};

inline CohortSummary cohort_summary(std::span<const ClinicalRecord> records) {
    CohortSummary s;
    for (const auto& r : records) {
        switch (outcome_branch(r)) {
            case OutcomeBranch::deceased: ++s.deceased; break;
            case OutcomeBranch::no_efs_event: ++s.no_efs_event; break;
            case OutcomeBranch::efs_before_chemo: ++s.efs_before_chemo; break;
            case OutcomeBranch::efs_during_or_after: ++s.efs_during_or_after; break;
            case OutcomeBranch::excluded: ++s.excluded; break;
        }
        switch (derive_outcome(r)) {
            case Outcome::effective: ++s.effective; break;
            case Outcome::not_effective: ++s.not_effective; break;
            case Outcome::excluded: break;
        }
    }
    return s;
}

inline const std::vector<std::string>& cohort_csv_header() {
    static const std::vector<std::string> h = {
        "case_id",           "legal_sex",         "ethnicity",
        "race",              "age_at_event_days", "molecular_subtype",
        "tumor_locations",   "initial_surgery_status", "metastatic_status",
        "metastasis_location", "chemotherapy_type", "protocol_name",
        "chemotherapy_agents", "t_chemo_start",    "t_chemo_end",
        "t_efs",             "has_subsequent_efs", "deceased_due_to_illness"};
    return h;
}

namespace detail {

inline bool is_missing(const std::string& s) { return s.empty() || s == "NA"; }

inline std::optional<long> parse_optional_days(const std::string& s, const std::string& ctx) {
    if (is_missing(s)) return std::nullopt;
    return parse_long(s, ctx);
}

inline bool parse_bool(const std::string& s, const std::string& ctx) {
    if (is_missing(s)) return false;
    std::string t = s;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ParseError(ctx + ": '" + s + "' is not a boolean");
}

} // namespace detail

// Clinical CSV with the declared header; empty cells and "NA" are missing.
inline std::vector<ClinicalRecord> load_cohort(const std::string& path) {
    const CsvTable t = read_csv(path);
    std::vector<int> col;
    col.reserve(cohort_csv_header().size());
    for (const auto& name : cohort_csv_header()) col.push_back(t.column(name));

    std::vector<ClinicalRecord> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const std::string ctx = "row " + std::to_string(i + 1);
        auto f = [&](int j) -> const std::string& { return row[std::size_t(col[std::size_t(j)])]; };
        ClinicalRecord r;
        r.case_id = f(0);
        r.legal_sex = f(1);
        r.ethnicity = f(2);
        r.race = f(3);
        r.age_at_event_days = parse_long(f(4), ctx + ": age_at_event_days");
        if (r.age_at_event_days < 0)
            throw ParseError(ctx + ": age_at_event_days must be non-negative");
        r.molecular_subtype = f(5);
        r.tumor_locations = f(6);
        r.initial_surgery_status = f(7);
        r.metastatic_status = f(8);
        r.metastasis_location = f(9);
        r.chemotherapy_type = f(10);
        r.protocol_name = f(11);
        r.chemotherapy_agents = f(12);
        r.t_chemo_start = detail::parse_optional_days(f(13), ctx + ": t_chemo_start");
        r.t_chemo_end = detail::parse_optional_days(f(14), ctx + ": t_chemo_end");
        r.t_efs = detail::parse_optional_days(f(15), ctx + ": t_efs");
        r.has_subsequent_efs = detail::parse_bool(f(16), ctx + ": has_subsequent_efs");
        r.deceased_due_to_illness = detail::parse_bool(f(17), ctx + ": deceased_due_to_illness");
        if (r.t_chemo_start && r.t_chemo_end && *r.t_chemo_start > *r.t_chemo_end)
            throw ParseError(ctx + ": t_chemo_start exceeds t_chemo_end");
        out.push_back(std::move(r));
    }
    return out;
}

inline void write_cohort(std::span<const ClinicalRecord> records, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(records.size());
    auto opt = [](const std::optional<long>& v) { return v ? std::to_string(*v) : std::string("NA"); };
    for (const auto& r : records) {
        rows.push_back({r.case_id, r.legal_sex, r.ethnicity, r.race,
                        std::to_string(r.age_at_event_days), r.molecular_subtype, r.tumor_locations,
                        r.initial_surgery_status, r.metastatic_status, r.metastasis_location,
                        r.chemotherapy_type, r.protocol_name, r.chemotherapy_agents,
                        opt(r.t_chemo_start), opt(r.t_chemo_end), opt(r.t_efs),
                        r.has_subsequent_efs ? "true" : "false",
                        r.deceased_due_to_illness ? "true" : "false"});
    }
    write_csv(path, cohort_csv_header(), rows);
}

} // namespace chemoresp
