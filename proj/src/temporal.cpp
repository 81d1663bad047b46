#include "gridcap/temporal.hpp"

#include "gridcap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace gridcap::temporal {

namespace {

constexpr std::array<int, 12> kMonthDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

int kind_rank(DayKind kind)
{
    switch (kind) {
    case DayKind::min: return 0;
    case DayKind::median: return 1;
    case DayKind::max: return 2;
    case DayKind::calendar: return 3;
    }
    return 3;
}

} // namespace

int days_in_month(int month)
{
    if (month < 1 || month > 12) {
        throw ValidationError("month out of range: " + std::to_string(month));
    }
    return kMonthDays[static_cast<std::size_t>(month - 1)];
}

std::string_view to_string(DayKind kind)
{
    switch (kind) {
    case DayKind::max: return "max";
    case DayKind::median: return "median";
    case DayKind::min: return "min";
    case DayKind::calendar: return "calendar";
    }
    return "calendar";
}

Rational compute_timepoint_weight_exact(long n_timepoints, long hours_in_tmp)
{
    if (n_timepoints <= 0 || hours_in_tmp <= 0) {
        throw ValidationError("timepoint weight needs positive counts (n_timepoints=" + std::to_string(n_timepoints) +
                              ", hours_in_tmp=" + std::to_string(hours_in_tmp) + ")");
    }
    return Rational(kHoursPerYear, static_cast<std::int64_t>(n_timepoints) * hours_in_tmp);
}

double compute_timepoint_weight(long n_timepoints, long hours_in_tmp)
{
    if (n_timepoints <= 0 || hours_in_tmp <= 0) {
        throw ValidationError("timepoint weight needs positive counts (n_timepoints=" + std::to_string(n_timepoints) +
                              ", hours_in_tmp=" + std::to_string(hours_in_tmp) + ")");
    }
    return static_cast<double>(kHoursPerYear) / (static_cast<double>(n_timepoints) * static_cast<double>(hours_in_tmp));
}

// ---------------------------------------------------------------------------

TemporalStructure::TemporalStructure(Period period, std::vector<Horizon> horizons, std::vector<Timepoint> timepoints)
    : period_(std::move(period)), horizons_(std::move(horizons)), timepoints_(std::move(timepoints))
{
    if (period_.discount_rate < 0.0) {
        throw ValidationError("discount rate must be non-negative");
    }
    if (timepoints_.empty()) {
        throw ValidationError("temporal structure has no timepoints");
    }
    by_horizon_.assign(horizons_.size(), {});
    for (std::size_t h = 0; h < horizons_.size(); ++h) {
        if (horizons_[h].id != static_cast<int>(h)) {
            throw ValidationError("horizon ids must be consecutive from 0");
        }
        if (horizons_[h].month < 0 || horizons_[h].month > 12) {
            throw ValidationError("horizon " + std::to_string(h) + " has month out of range");
        }
    }
    int last_horizon = -1;
    for (std::size_t i = 0; i < timepoints_.size(); ++i) {
        const auto& tp = timepoints_[i];
        if (tp.id != static_cast<int>(i)) {
            throw ValidationError("timepoint ids must be consecutive from 0");
        }
        if (tp.horizon < 0 || tp.horizon >= static_cast<int>(horizons_.size())) {
            throw ValidationError("timepoint " + std::to_string(i) + " references unknown horizon");
        }
        if (tp.horizon < last_horizon) {
            throw ValidationError("timepoints must be grouped by horizon in chronological order");
        }
        last_horizon = tp.horizon;
        if (tp.hours_in_tmp <= 0 || tp.weight <= 0) {
            throw ValidationError("timepoint " + std::to_string(i) + " needs positive hours_in_tmp and weight");
        }
        if (tp.hour_of_day < 0 || tp.hour_of_day > 23) {
            throw ValidationError("timepoint " + std::to_string(i) + " hour_of_day out of range");
        }
        by_horizon_[static_cast<std::size_t>(tp.horizon)].push_back(tp.id);
    }
    for (std::size_t h = 0; h < by_horizon_.size(); ++h) {
        if (by_horizon_[h].empty()) {
            throw ValidationError("horizon " + std::to_string(h) + " has no timepoints");
        }
    }
    if (weighted_hours() != Rational(kHoursPerYear)) {
        std::ostringstream msg;
        msg << "timepoint weights cover " << weighted_hours() << " hours, expected " << kHoursPerYear;
        throw ValidationError(msg.str());
    }
}

TemporalStructure TemporalStructure::uniform(Period period, std::vector<Horizon> horizons, int tps_per_horizon,
                                             int hours_in_tmp)
{
    if (tps_per_horizon <= 0 || hours_in_tmp <= 0) {
        throw ValidationError("uniform layout needs positive timepoint counts");
    }
    const long n = static_cast<long>(horizons.size()) * tps_per_horizon;
    const Rational weight = compute_timepoint_weight_exact(n, hours_in_tmp);
    std::vector<Timepoint> tps;
    tps.reserve(static_cast<std::size_t>(n));
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        horizons[h].id = static_cast<int>(h);
        for (int k = 0; k < tps_per_horizon; ++k) {
            Timepoint tp;
            tp.id = static_cast<int>(tps.size());
            tp.horizon = static_cast<int>(h);
            tp.hour_of_day = (k * hours_in_tmp) % 24;
            tp.hours_in_tmp = hours_in_tmp;
            tp.weight = weight;
            tps.push_back(tp);
        }
    }
    return TemporalStructure(std::move(period), std::move(horizons), std::move(tps));
}

TemporalStructure TemporalStructure::representative(Period period, const std::vector<RepresentativeDays>& days)
{
    auto sorted = days;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.month < b.month; });
    std::vector<Horizon> horizons;
    for (const auto& m : sorted) {
        std::array<Horizon, 3> trio{Horizon{0, m.month, DayKind::max, m.max_day},
                                    Horizon{0, m.month, DayKind::median, m.median_day},
                                    Horizon{0, m.month, DayKind::min, m.min_day}};
        std::stable_sort(trio.begin(), trio.end(),
                         [](const Horizon& a, const Horizon& b) { return a.source_day < b.source_day; });
        horizons.insert(horizons.end(), trio.begin(), trio.end());
    }
    return uniform(std::move(period), std::move(horizons), 24, 1);
}

TemporalStructure TemporalStructure::full_year(Period period)
{
    std::vector<Horizon> horizons;
    horizons.reserve(kDaysPerYear);
    for (int m = 1; m <= 12; ++m) {
        for (int d = 1; d <= days_in_month(m); ++d) {
            horizons.push_back(Horizon{0, m, DayKind::calendar, d});
        }
    }
    return uniform(std::move(period), std::move(horizons), 24, 1);
}

std::span<const int> TemporalStructure::horizon_timepoints(int horizon) const
{
    return by_horizon_.at(static_cast<std::size_t>(horizon));
}

int TemporalStructure::month_of(int tp) const
{
    return horizons_[static_cast<std::size_t>(timepoints_.at(static_cast<std::size_t>(tp)).horizon)].month;
}

int TemporalStructure::previous_in_horizon(int tp) const
{
    const auto& members = by_horizon_[static_cast<std::size_t>(timepoints_.at(static_cast<std::size_t>(tp)).horizon)];
    return tp == members.front() ? members.back() : tp - 1;
}

int TemporalStructure::previous_in_period(int tp) const
{
    return tp == 0 ? static_cast<int>(timepoints_.size()) - 1 : tp - 1;
}

Rational TemporalStructure::weighted_hours() const
{
    Rational total{0};
    for (const auto& tp : timepoints_) {
        total += tp.weight * static_cast<std::int64_t>(tp.hours_in_tmp);
    }
    return total;
}

// ---------------------------------------------------------------------------

RepresentativeDays select_representative_days(int month, const DailyTotals& totals)
{
    if (totals.size() < 3) {
        throw ValidationError("month " + std::to_string(month) + " has " + std::to_string(totals.size()) +
                              " complete days; at least 3 are needed");
    }
    // Order by (total, day) so ties resolve to the lowest day number.
    auto ordered = totals;
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    RepresentativeDays out;
    out.month = month;
    out.min_day = ordered.front().first;

    const double max_total = ordered.back().second;
    const double median_total = ordered[(ordered.size() - 1) / 2].second;
    out.max_day = std::numeric_limits<int>::max();
    out.median_day = std::numeric_limits<int>::max();
    for (const auto& [day, total] : totals) {
        if (total == max_total) out.max_day = std::min(out.max_day, day);
        if (total == median_total) out.median_day = std::min(out.median_day, day);
    }
    return out;
}

std::vector<RepresentativeDays> select_representative_days(const std::map<int, DailyTotals>& monthly_totals)
{
    std::vector<RepresentativeDays> out;
    out.reserve(monthly_totals.size());
    for (const auto& [month, totals] : monthly_totals) {
        out.push_back(select_representative_days(month, totals));
    }
    return out;
}

// ---------------------------------------------------------------------------

void HourlySeries::set(int month, int day, int hour, double value)
{
    if (month < 1 || month > 12 || day < 1 || day > days_in_month(month) || hour < 0 || hour > 23) {
        throw ValidationError("calendar position out of range: month " + std::to_string(month) + " day " +
                              std::to_string(day) + " hour " + std::to_string(hour));
    }
    auto& slot = values_[{month, day}];
    slot.value[static_cast<std::size_t>(hour)] = value;
    slot.present |= (1u << hour);
}

bool HourlySeries::has_day(int month, int day) const { return values_.count({month, day}) != 0; }

bool HourlySeries::has(int month, int day, int hour) const
{
    auto it = values_.find({month, day});
    return it != values_.end() && hour >= 0 && hour < 24 && (it->second.present & (1u << hour));
}

double HourlySeries::at(int month, int day, int hour) const
{
    auto it = values_.find({month, day});
    if (it == values_.end() || !(it->second.present & (1u << hour))) {
        throw ValidationError("no value for month " + std::to_string(month) + " day " + std::to_string(day) +
                              " hour " + std::to_string(hour));
    }
    return it->second.value[static_cast<std::size_t>(hour)];
}

bool HourlySeries::complete(int month, int day) const
{
    auto it = values_.find({month, day});
    return it != values_.end() && it->second.present == 0xFFFFFFu;
}

std::vector<int> HourlySeries::missing_hours(int month, int day) const
{
    std::vector<int> missing;
    auto it = values_.find({month, day});
    for (int h = 0; h < 24; ++h) {
        if (it == values_.end() || !(it->second.present & (1u << h))) missing.push_back(h);
    }
    return missing;
}

std::vector<std::pair<int, int>> HourlySeries::days() const
{
    std::vector<std::pair<int, int>> out;
    out.reserve(values_.size());
    for (const auto& [key, _] : values_) out.push_back(key);
    return out;
}

std::map<int, DailyTotals> HourlySeries::daily_totals() const
{
    std::map<int, DailyTotals> out;
    std::ostringstream problems;
    bool incomplete = false;
    for (const auto& [key, day] : values_) {
        if (day.present != 0xFFFFFFu) {
            incomplete = true;
            problems << "\n  month " << key.first << " day " << key.second << ": missing hours";
            for (int h : missing_hours(key.first, key.second)) problems << ' ' << h;
            continue;
        }
        out[key.first].emplace_back(key.second, std::accumulate(day.value.begin(), day.value.end(), 0.0));
    }
    if (incomplete) {
        throw ValidationError("incomplete days in hourly series:" + problems.str());
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<int> build_chronology(const TemporalStructure& structure, const std::map<int, DailyTotals>& monthly_totals)
{
    const auto& horizons = structure.horizons();

    // hour-of-day -> timepoint, per horizon
    std::vector<std::array<int, 24>> hour_map(horizons.size());
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        hour_map[h].fill(-1);
        for (int tp : structure.horizon_timepoints(static_cast<int>(h))) {
            const auto& t = structure.timepoints()[static_cast<std::size_t>(tp)];
            for (int k = 0; k < t.hours_in_tmp; ++k) {
                hour_map[h][static_cast<std::size_t>((t.hour_of_day + k) % 24)] = tp;
            }
        }
        for (int hour = 0; hour < 24; ++hour) {
            if (hour_map[h][static_cast<std::size_t>(hour)] < 0) {
                throw ValidationError("horizon " + std::to_string(h) + " does not cover hour " + std::to_string(hour));
            }
        }
    }

    std::vector<int> chronology;
    chronology.reserve(kHoursPerYear);
    for (int month = 1; month <= 12; ++month) {
        std::vector<int> candidates;
        for (const auto& hz : horizons) {
            if (hz.month == month) candidates.push_back(hz.id);
        }
        if (candidates.empty()) {
            for (const auto& hz : horizons) {
                if (hz.month == 0) candidates.push_back(hz.id);
            }
        }
        if (candidates.empty()) {
            throw ValidationError("no horizon covers month " + std::to_string(month));
        }
        const int n_days = days_in_month(month);
        std::vector<int> day_to_horizon(static_cast<std::size_t>(n_days + 1), -1);

        const bool calendar = std::all_of(candidates.begin(), candidates.end(), [&](int h) {
            return horizons[static_cast<std::size_t>(h)].kind == DayKind::calendar &&
                   horizons[static_cast<std::size_t>(h)].source_day > 0;
        });
        if (calendar && candidates.size() > 1) {
            for (int h : candidates) {
                const int day = horizons[static_cast<std::size_t>(h)].source_day;
                if (day <= n_days) day_to_horizon[static_cast<std::size_t>(day)] = h;
            }
            for (int d = 1; d <= n_days; ++d) {
                if (day_to_horizon[static_cast<std::size_t>(d)] < 0) {
                    throw ValidationError("no calendar horizon for month " + std::to_string(month) + " day " +
                                          std::to_string(d));
                }
            }
        } else {
            std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
                const auto& ha = horizons[static_cast<std::size_t>(a)];
                const auto& hb = horizons[static_cast<std::size_t>(b)];
                if (kind_rank(ha.kind) != kind_rank(hb.kind)) return kind_rank(ha.kind) < kind_rank(hb.kind);
                return ha.source_day < hb.source_day;
            });
            const std::size_t k = candidates.size();
            const int fallback = candidates[k / 2];

            DailyTotals ranked;
            if (auto it = monthly_totals.find(month); it != monthly_totals.end()) {
                for (const auto& entry : it->second) {
                    if (entry.first >= 1 && entry.first <= n_days) ranked.push_back(entry);
                }
            }
            std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
                return a.second != b.second ? a.second < b.second : a.first < b.first;
            });

            // Balanced bins over the demand ranking; leftover days go to the
            // bins closest to the middle.
            const std::size_t n = ranked.size();
            std::vector<std::size_t> bin_size(k, n / k);
            std::vector<std::size_t> order(k);
            std::iota(order.begin(), order.end(), 0);
            const double mid = (static_cast<double>(k) - 1.0) / 2.0;
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return std::abs(static_cast<double>(a) - mid) < std::abs(static_cast<double>(b) - mid);
            });
            for (std::size_t r = 0; r < n % k; ++r) ++bin_size[order[r]];

            std::size_t pos = 0;
            for (std::size_t b = 0; b < k; ++b) {
                for (std::size_t c = 0; c < bin_size[b]; ++c, ++pos) {
                    day_to_horizon[static_cast<std::size_t>(ranked[pos].first)] = candidates[b];
                }
            }
            for (int d = 1; d <= n_days; ++d) {
                if (day_to_horizon[static_cast<std::size_t>(d)] < 0) day_to_horizon[static_cast<std::size_t>(d)] = fallback;
            }
        }

        for (int d = 1; d <= n_days; ++d) {
            const auto& hours = hour_map[static_cast<std::size_t>(day_to_horizon[static_cast<std::size_t>(d)])];
            chronology.insert(chronology.end(), hours.begin(), hours.end());
        }
    }
    return chronology;
}

} // namespace gridcap::temporal
