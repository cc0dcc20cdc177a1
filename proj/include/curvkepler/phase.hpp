#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace curvkepler {

/// Raw phase-space coordinates (x1, x2, x3, p1, p2, p3).
template <class T>
using PhaseArray = std::array<T, 6>;
using PhasePoint = PhaseArray<double>;
using Gradient = std::array<double, 6>;

/// Coordinate chart of a phase-space point.
///  - Beltrami:      (q1, q2, q3, p1, p2, p3), the coalgebra realization chart
///  - PolarVariable: (rho, theta, phi, p_rho, p_theta, p_phi), variable-curvature spaces
///  - PolarConstant: (r, theta, phi, p_r, p_theta, p_phi), geodesic polar coordinates
enum class Chart { Beltrami, PolarVariable, PolarConstant };

inline std::string_view to_string(Chart c) {
    switch (c) {
        case Chart::Beltrami: return "beltrami";
        case Chart::PolarVariable: return "polar-variable";
        case Chart::PolarConstant: return "polar-constant";
    }
    return "?";
}

inline Chart parse_chart(std::string_view s) {
    if (s == "beltrami") return Chart::Beltrami;
    if (s == "polar-variable") return Chart::PolarVariable;
    if (s == "polar-constant") return Chart::PolarConstant;
    throw std::invalid_argument("unknown chart '" + std::string(s) + "'");
}

/// A point of the 6-dimensional phase space tagged with its chart.
struct PhaseState {
    Chart chart = Chart::Beltrami;
    PhasePoint x{};

    double position(int i) const { return x[static_cast<std::size_t>(i)]; }
    double momentum(int i) const { return x[static_cast<std::size_t>(i) + 3]; }
};

/// Operation applied to a state (or observable) of the wrong chart.
class ChartMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Point outside a chart's domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Point on a chart degeneracy (pole, axis, collision).
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

inline void require_chart(const PhaseState& s, Chart expected, std::string_view what) {
    if (s.chart != expected)
        throw ChartMismatch(std::string(what) + ": expected chart " + std::string(to_string(expected)) + ", got " +
                            std::string(to_string(s.chart)));
}

}  // namespace curvkepler
