#include "gridcap/errors.hpp"
#include "gridcap/temporal.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

using namespace gridcap;
using namespace gridcap::temporal;

namespace {

std::vector<RepresentativeDays> three_per_month()
{
    std::vector<RepresentativeDays> days;
    for (int m = 1; m <= 12; ++m) days.push_back({m, 20, 10, 3});
    return days;
}

std::map<int, DailyTotals> random_totals(unsigned seed)
{
    std::mt19937 gen(seed);
    std::map<int, DailyTotals> out;
    for (int m = 1; m <= 12; ++m) {
        for (int d = 1; d <= days_in_month(m); ++d) out[m].push_back({d, 1000.0 + static_cast<double>(gen() % 5000)});
    }
    return out;
}

} // namespace

TEST(TimepointWeight, FullYearHourlyIsOne) { EXPECT_DOUBLE_EQ(compute_timepoint_weight(8760, 1), 1.0); }

TEST(TimepointWeight, ThirtySixDays) { EXPECT_NEAR(compute_timepoint_weight(864, 1), 10.138888888888889, 1e-12); }

TEST(TimepointWeight, DailyTimepoints) { EXPECT_DOUBLE_EQ(compute_timepoint_weight(365, 24), 1.0); }

TEST(TimepointWeight, ExactFormIsRational)
{
    EXPECT_EQ(compute_timepoint_weight_exact(864, 1), Rational(365, 36));
    EXPECT_EQ(compute_timepoint_weight_exact(8760, 1), Rational(1));
}

TEST(TimepointWeight, RejectsNonPositive)
{
    EXPECT_THROW(compute_timepoint_weight(0, 1), ValidationError);
    EXPECT_THROW(compute_timepoint_weight(10, 0), ValidationError);
    EXPECT_THROW(compute_timepoint_weight(-4, 1), ValidationError);
    EXPECT_THROW(compute_timepoint_weight_exact(5, -1), ValidationError);
}

TEST(RepresentativeDays, IncreasingTotals)
{
    DailyTotals t;
    for (int d = 1; d <= 30; ++d) t.push_back({d, 100.0 + d});
    const auto r = select_representative_days(4, t);
    EXPECT_EQ(r.max_day, 30);
    EXPECT_EQ(r.median_day, 15);
    EXPECT_EQ(r.min_day, 1);
}

TEST(RepresentativeDays, IdenticalDaysPickFirst)
{
    DailyTotals t;
    for (int d = 1; d <= 31; ++d) t.push_back({d, 7.0});
    const auto r = select_representative_days(1, t);
    EXPECT_EQ(r.max_day, 1);
    EXPECT_EQ(r.median_day, 1);
    EXPECT_EQ(r.min_day, 1);
}

TEST(RepresentativeDays, EvenCountUsesLowerMiddle)
{
    const auto r = select_representative_days(2, {{1, 5}, {2, 9}, {3, 2}, {4, 7}});
    EXPECT_EQ(r.max_day, 2);
    EXPECT_EQ(r.median_day, 1);
    EXPECT_EQ(r.min_day, 3);
}

TEST(RepresentativeDays, TooFewDays) { EXPECT_THROW(select_representative_days(1, {{1, 1.0}, {2, 2.0}}), ValidationError); }

TEST(RepresentativeDays, SelectedTotalsAreOrdered)
{
    for (unsigned seed = 1; seed <= 20; ++seed) {
        for (const auto& [m, totals] : random_totals(seed)) {
            const auto r = select_representative_days(m, totals);
            std::map<int, double> by_day(totals.begin(), totals.end());
            EXPECT_LE(by_day[r.min_day], by_day[r.median_day]);
            EXPECT_LE(by_day[r.median_day], by_day[r.max_day]);
            for (const auto& [d, v] : totals) {
                EXPECT_GE(v, by_day[r.min_day]);
                EXPECT_LE(v, by_day[r.max_day]);
            }
        }
    }
}

TEST(TemporalStructure, RepresentativeLayout)
{
    const auto ts = TemporalStructure::representative({}, three_per_month());
    EXPECT_EQ(ts.horizons().size(), 36u);
    EXPECT_EQ(ts.size(), 864u);
    EXPECT_EQ(ts.weighted_hours(), Rational(8760));
    for (int m = 1; m <= 12; ++m) {
        int count = 0;
        std::set<DayKind> kinds;
        for (const auto& h : ts.horizons()) {
            if (h.month == m) {
                ++count;
                kinds.insert(h.kind);
            }
        }
        EXPECT_EQ(count, 3);
        EXPECT_EQ(kinds.size(), 3u);
    }
    for (const auto& tp : ts.timepoints()) {
        EXPECT_EQ(tp.weight, Rational(365, 36));
        EXPECT_GT(tp.weight_value(), 0.0);
    }
}

TEST(TemporalStructure, HorizonsInCalendarOrderWithinMonth)
{
    const auto ts = TemporalStructure::representative({}, three_per_month());
    for (std::size_t h = 0; h + 1 < ts.horizons().size(); ++h) {
        const auto& a = ts.horizons()[h];
        const auto& b = ts.horizons()[h + 1];
        if (a.month == b.month) EXPECT_LT(a.source_day, b.source_day);
        else EXPECT_LT(a.month, b.month);
    }
}

TEST(TemporalStructure, FullYear)
{
    const auto ts = TemporalStructure::full_year({});
    EXPECT_EQ(ts.size(), 8760u);
    EXPECT_EQ(ts.horizons().size(), 365u);
    EXPECT_EQ(ts.weighted_hours(), Rational(8760));
    EXPECT_DOUBLE_EQ(ts.timepoints()[100].scale(), 1.0);
}

TEST(TemporalStructure, UniformMultiHour)
{
    std::vector<Horizon> hs{{0, 0, DayKind::calendar, 0}, {1, 0, DayKind::calendar, 0}};
    const auto ts = TemporalStructure::uniform({}, hs, 4, 6);
    EXPECT_EQ(ts.size(), 8u);
    EXPECT_EQ(ts.weighted_hours(), Rational(8760));
    EXPECT_DOUBLE_EQ(ts.timepoints()[0].scale(), 1095.0);
}

TEST(TemporalStructure, PreviousTimepoints)
{
    std::vector<Horizon> hs{{0, 0, DayKind::calendar, 0}, {1, 0, DayKind::calendar, 0}};
    const auto ts = TemporalStructure::uniform({}, hs, 3);
    EXPECT_EQ(ts.previous_in_horizon(0), 2);
    EXPECT_EQ(ts.previous_in_horizon(1), 0);
    EXPECT_EQ(ts.previous_in_horizon(3), 5);
    EXPECT_EQ(ts.previous_in_period(0), 5);
    EXPECT_EQ(ts.previous_in_period(3), 2);
}

TEST(TemporalStructure, RejectsBadDiscountRate)
{
    Period p;
    p.discount_rate = -0.01;
    EXPECT_THROW(TemporalStructure::representative(p, three_per_month()), ValidationError);
}

TEST(TemporalStructure, RejectsWeightsNotSummingToYear)
{
    std::vector<Horizon> hs{{0, 1, DayKind::calendar, 1}};
    std::vector<Timepoint> tps;
    for (int h = 0; h < 24; ++h) tps.push_back({h, 0, h, 1, Rational(1)});
    EXPECT_THROW(TemporalStructure({}, hs, tps), ValidationError);
}

TEST(HourlySeries, MissingHoursAreListed)
{
    HourlySeries s;
    for (int h = 0; h < 24; ++h) {
        if (h != 5) s.set(3, 2, h, 1.0);
    }
    EXPECT_FALSE(s.complete(3, 2));
    EXPECT_EQ(s.missing_hours(3, 2), std::vector<int>{5});
    try {
        s.daily_totals();
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find('5'), std::string::npos);
    }
}

TEST(HourlySeries, DailyTotals)
{
    HourlySeries s;
    for (int h = 0; h < 24; ++h) {
        s.set(1, 1, h, 2.0);
        s.set(1, 2, h, h);
    }
    const auto t = s.daily_totals();
    ASSERT_EQ(t.at(1).size(), 2u);
    EXPECT_DOUBLE_EQ(t.at(1)[0].second, 48.0);
    EXPECT_DOUBLE_EQ(t.at(1)[1].second, 276.0);
}

TEST(Chronology, CoversCalendarWithValidIds)
{
    const auto ts = TemporalStructure::representative({}, three_per_month());
    const auto chron = build_chronology(ts, random_totals(7));
    ASSERT_EQ(chron.size(), 8760u);
    for (int id : chron) {
        ASSERT_GE(id, 0);
        ASSERT_LT(id, static_cast<int>(ts.size()));
    }
}

TEST(Chronology, SingleHorizonMapsByHour)
{
    std::vector<Horizon> hs{{0, 0, DayKind::calendar, 0}};
    const auto ts = TemporalStructure::uniform({}, hs, 24);
    const auto chron = build_chronology(ts, {});
    ASSERT_EQ(chron.size(), 8760u);
    for (std::size_t i = 0; i < chron.size(); ++i) EXPECT_EQ(chron[i], static_cast<int>(i % 24));
}

TEST(Chronology, HoursPerTimepointMatchWeights)
{
    const auto ts = TemporalStructure::representative({}, three_per_month());
    const auto chron = build_chronology(ts, random_totals(11));
    std::vector<int> count(ts.size(), 0);
    for (int id : chron) ++count[static_cast<std::size_t>(id)];
    for (std::size_t tp = 0; tp < ts.size(); ++tp) {
        const int month = ts.month_of(static_cast<int>(tp));
        const double slack = month == 2 ? 1.2 : 1.0;
        EXPECT_LE(std::abs(count[tp] - ts.timepoints()[tp].scale()), slack + 1e-9) << "timepoint " << tp;
    }
}

TEST(Chronology, MinDaysMapToMinHorizon)
{
    const auto ts = TemporalStructure::representative({}, three_per_month());
    std::map<int, DailyTotals> totals;
    for (int m = 1; m <= 12; ++m) {
        for (int d = 1; d <= days_in_month(m); ++d) totals[m].push_back({d, static_cast<double>(d)});
    }
    const auto chron = build_chronology(ts, totals);
    // Day 1 of January has the lowest total, so it maps to the min horizon.
    const int tp = chron[0];
    const auto& h = ts.horizons()[static_cast<std::size_t>(ts.timepoints()[static_cast<std::size_t>(tp)].horizon)];
    EXPECT_EQ(h.kind, DayKind::min);
    EXPECT_EQ(h.month, 1);
}
