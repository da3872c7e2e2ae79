#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "webeco/causality/granger.hpp"
#include "webeco/date.hpp"
#include "webeco/stats/timeseries.hpp"

namespace webeco::causality {

enum Role : std::size_t { RoleX = 0, RoleY = 1, RoleZ = 2 };

struct NamedSeries {
    std::string name;
    stats::TimeSeries series;
};

/// Three series playing the roles x, y, z.
struct SeriesGroup {
    std::string name;
    std::array<NamedSeries, 3> series;
};

/// Unordered pair of roles; both directions are tested, conditioned on the third.
struct RolePair {
    Role a = RoleX;
    Role b = RoleY;
};

enum class FdrFamily { Joint, PerGroup };

struct PipelineConfig {
    std::optional<Date> from;
    std::optional<Date> to;
    double q = 0.05;
    std::size_t bootstrap = 1000;
    std::uint64_t seed = 0;
    std::size_t p_max = 14;
    std::size_t max_diff = 2;
    std::size_t min_overlap = 100;
    bool adf_trend = false;  // unit-root regressions include a linear trend
    std::vector<RolePair> pairs{{RoleX, RoleY}, {RoleX, RoleZ}, {RoleY, RoleZ}};
    FdrFamily family = FdrFamily::Joint;
    std::size_t jobs = 1;
};

struct DirectionResult {
    std::string group;
    std::string cause;
    std::string effect;
    std::string conditioned_on;
    PgcResult pgc;
    bool rejected = false;  // after Benjamini-Hochberg
    std::size_t d = 0;
};

struct GroupSummary {
    std::string name;
    Date first;
    Date last;
    std::size_t aligned = 0;
    std::array<std::size_t, 3> individual_d{};
    std::size_t d = 0;
    std::size_t lag = 0;
};

struct PipelineReport {
    PipelineConfig config;
    std::vector<GroupSummary> groups;
    std::vector<DirectionResult> tests;

    std::vector<DirectionResult> arrows() const;
};

/// Align, stationarize with a shared differencing order, pick the lag by BIC,
/// run partial Granger both ways for every configured pair and BH-correct.
/// Throws AlignmentError when fewer than min_overlap common dates remain and
/// StationarityError naming the offending series.
PipelineReport causality_pipeline(const std::vector<SeriesGroup>& groups, const PipelineConfig& config);

/// Dates shared by all three series inside the optional window.
std::vector<Date> common_dates(const SeriesGroup& group, std::optional<Date> from, std::optional<Date> to);

struct PipelineJob {
    std::vector<SeriesGroup> groups;
    PipelineConfig config;
};

/// Reads a JSON job description. Series paths are resolved against base_dir.
/// Throws ParseError for malformed JSON or fields.
PipelineJob load_pipeline_job(std::istream& json, const std::filesystem::path& base_dir);

FdrFamily parse_fdr_family(const std::string& text);
std::string to_string(FdrFamily f);

void write_report_json(std::ostream& out, const PipelineReport& report);
void write_report_csv(std::ostream& out, const PipelineReport& report);

}  // namespace webeco::causality
