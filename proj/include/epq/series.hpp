#ifndef EPQ_SERIES_HPP
#define EPQ_SERIES_HPP

// Divided exponential differences. Every level and integral of the
// deteriorating-stock equations divides by the decay rate; these keep full
// precision as the rate goes to zero.

namespace epq::series {

/// Below this |z| the three-term Taylor series replaces the exponentials.
inline constexpr double kThreshold = 1e-6;

/// (1 - e^{-z}) / z
double decay_mean(double z);
/// (e^{z} - 1) / z
double growth_mean(double z);
/// (z - 1 + e^{-z}) / z^2
double decay_area(double z);
/// (e^{z} - 1 - z) / z^2
double growth_area(double z);

}  // namespace epq::series

#endif  // EPQ_SERIES_HPP
