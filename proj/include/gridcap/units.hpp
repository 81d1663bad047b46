#pragma once

namespace gridcap::units {

inline constexpr double kHoursPerYear = 8760.0;

/// Heat content used for all fuel accounting.
inline constexpr double kMmbtuPerMwh = 3.412;

/// Lower heating value of hydrogen.
inline constexpr double kH2LhvMjPerKg = 120.0;
inline constexpr double kMjPerKwh = 3.6;
inline constexpr double kH2KwhPerKg = kH2LhvMjPerKg / kMjPerKwh; // 33.333...

/// Cost-table inputs are per kW / kWh; the model works in MW / MWh.
inline constexpr double kKwPerMw = 1000.0;

} // namespace gridcap::units
