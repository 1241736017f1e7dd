#ifndef FSDSTACK_PLANNER_SPLINE_HPP
#define FSDSTACK_PLANNER_SPLINE_HPP

#include <vector>

#include "fsdstack/types.hpp"

namespace fsd {

/// Interpolating cubic spline over strictly increasing knots; natural or
/// periodic boundary. C2 by construction.
class CubicSpline1D {
public:
    CubicSpline1D() = default;
    CubicSpline1D(const std::vector<double>& knots, const std::vector<double>& values,
                  bool periodic);

    double eval(double t) const;
    double deriv(double t) const;
    double deriv2(double t) const;
    double t_min() const { return knots_.front(); }
    double t_max() const { return knots_.back(); }

private:
    int segment(double t) const;

    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> moments_;  // second derivatives at the knots
    bool periodic_ = false;
};

/// Planar C2 spline parameterized by cumulative chord length.
class CubicSpline2D {
public:
    CubicSpline2D(const std::vector<Vec2>& points, bool closed);

    Vec2 eval(double t) const;
    Vec2 deriv(double t) const;
    Vec2 deriv2(double t) const;
    double heading(double t) const;
    double curvature(double t) const;
    double t_max() const { return x_.t_max(); }
    bool closed() const { return closed_; }

private:
    CubicSpline1D x_, y_;
    bool closed_ = false;
};

/// Fits a C2 cubic spline through the points (chord-length parameter, natural
/// boundary for open paths, periodic for closed) and resamples it at close to
/// sample_ds arc spacing. Needs >= 4 points; consecutive duplicates are an
/// error. Speeds are left at zero for the velocity profile to fill.
Trajectory fit_spline(const std::vector<Vec2>& points, bool closed, double sample_ds);

/// Total-least-squares line fit (for straight layouts); samples along the
/// fitted line with zero curvature and the line's constant heading.
Trajectory fit_line(const std::vector<Vec2>& points, double sample_ds);

}  // namespace fsd

#endif  // FSDSTACK_PLANNER_SPLINE_HPP
