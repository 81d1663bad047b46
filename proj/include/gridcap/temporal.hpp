#pragma once

#include <boost/rational.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gridcap::temporal {

using Rational = boost::rational<std::int64_t>;

inline constexpr int kHoursPerYear = 8760;
inline constexpr int kDaysPerYear = 365;

/// Days in each month of the (non-leap) model year, 1-based month.
int days_in_month(int month);

struct Period {
    std::string label = "2050";
    double discount_rate = 0.08;
    int dollar_year = 2020;
};

enum class DayKind { max, median, min, calendar };

std::string_view to_string(DayKind kind);

struct Horizon {
    int id = 0;
    /// 1..12, or 0 for a horizon that stands in for every month.
    int month = 0;
    DayKind kind = DayKind::calendar;
    /// Calendar day of month the horizon was drawn from (1-based), 0 if synthetic.
    int source_day = 0;
};

struct Timepoint {
    int id = 0;
    int horizon = 0;
    int hour_of_day = 0;
    int hours_in_tmp = 1;
    Rational weight{1};

    double weight_value() const { return boost::rational_cast<double>(weight); }
    /// weight x hours_in_tmp: calendar hours this timepoint represents.
    double scale() const { return weight_value() * hours_in_tmp; }
};

/// tmp_weight = 8760 / (number of timepoints x hours_in_tmp).
double compute_timepoint_weight(long n_timepoints, long hours_in_tmp);
Rational compute_timepoint_weight_exact(long n_timepoints, long hours_in_tmp);

/// Days picked for one month; day numbers are 1-based within the month.
struct RepresentativeDays {
    int month = 0;
    int max_day = 0;
    int median_day = 0;
    int min_day = 0;
};

/// Single-period set of horizons and weighted timepoints. Timepoints are stored
/// in chronological order: horizons in order, hours in order within a horizon.
class TemporalStructure {
public:
    TemporalStructure() = default;
    TemporalStructure(Period period, std::vector<Horizon> horizons, std::vector<Timepoint> timepoints);

    /// Horizons of `tps_per_horizon` timepoints each; every timepoint gets the
    /// uniform tmp_weight for the resulting timepoint count.
    static TemporalStructure uniform(Period period, std::vector<Horizon> horizons, int tps_per_horizon,
                                     int hours_in_tmp = 1);

    /// Three 24-hour horizons per month (max, median, min), in calendar order
    /// of the selected days within each month.
    static TemporalStructure representative(Period period, const std::vector<RepresentativeDays>& days);

    /// One 24-hour horizon per calendar day, weight 1.
    static TemporalStructure full_year(Period period);

    const Period& period() const { return period_; }
    const std::vector<Horizon>& horizons() const { return horizons_; }
    const std::vector<Timepoint>& timepoints() const { return timepoints_; }
    std::size_t size() const { return timepoints_.size(); }

    std::span<const int> horizon_timepoints(int horizon) const;
    int month_of(int tp) const;

    /// Predecessor inside the timepoint's horizon, wrapping to the last hour.
    int previous_in_horizon(int tp) const;
    /// Predecessor across the whole period, wrapping from the first timepoint
    /// to the last one.
    int previous_in_period(int tp) const;

    /// Sum of weight x hours_in_tmp, exact.
    Rational weighted_hours() const;

private:
    Period period_;
    std::vector<Horizon> horizons_;
    std::vector<Timepoint> timepoints_;
    std::vector<std::vector<int>> by_horizon_;
};

/// Daily total demand of each day of one month: (day of month, total).
using DailyTotals = std::vector<std::pair<int, double>>;

/// Max-, median- and min-demand day of each month. The median of an even
/// number of days is the lower of the two middle values; ties go to the
/// lowest day number.
RepresentativeDays select_representative_days(int month, const DailyTotals& totals);
std::vector<RepresentativeDays> select_representative_days(const std::map<int, DailyTotals>& monthly_totals);

/// Hourly series keyed by (month, day); an hour that was never set is missing.
class HourlySeries {
public:
    void set(int month, int day, int hour, double value);
    bool has_day(int month, int day) const;
    bool has(int month, int day, int hour) const;
    double at(int month, int day, int hour) const;
    bool complete(int month, int day) const;
    std::vector<int> missing_hours(int month, int day) const;
    /// (month, day) pairs in calendar order.
    std::vector<std::pair<int, int>> days() const;
    std::size_t size() const { return values_.size(); }

    /// Daily totals per month. Throws ValidationError listing the missing
    /// hours when any present day is incomplete.
    std::map<int, DailyTotals> daily_totals() const;

private:
    struct Day {
        std::array<double, 24> value{};
        std::uint32_t present = 0;
    };
    std::map<std::pair<int, int>, Day> values_;
};

/// Maps each of the 8760 calendar hours to a timepoint id. Each month's days
/// are ranked by total demand and split into as many equal rank bins as the
/// month has horizons, lowest-demand bin to the min horizon; within the day the
/// hour maps to the timepoint covering that hour. Days without demand data map
/// to the median horizon.
std::vector<int> build_chronology(const TemporalStructure& structure,
                                  const std::map<int, DailyTotals>& monthly_totals);

} // namespace gridcap::temporal
