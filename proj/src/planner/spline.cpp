#include "fsdstack/planner/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace fsd {

CubicSpline1D::CubicSpline1D(const std::vector<double>& knots, const std::vector<double>& values,
                             bool periodic)
    : knots_(knots), values_(values), periodic_(periodic) {
    const int n = static_cast<int>(knots.size()) - 1;  // segment count
    if (n < 1 || values.size() != knots.size()) {
        throw std::invalid_argument("CubicSpline1D: need >= 2 knots and matching values");
    }
    for (int i = 0; i < n; ++i) {
        if (!(knots[i + 1] > knots[i])) {
            throw std::invalid_argument("CubicSpline1D: knots must be strictly increasing");
        }
    }
    moments_.assign(n + 1, 0.0);
    if (n == 1) return;  // single segment: linear (zero moments)

    auto h = [&](int i) { return knots_[i + 1] - knots_[i]; };
    auto slope = [&](int i) { return (values_[i + 1] - values_[i]) / h(i); };

    if (!periodic_) {
        // Natural boundary: M_0 = M_n = 0; tridiagonal system for the rest.
        const int m = n - 1;
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
        Eigen::VectorXd rhs(m);
        for (int i = 1; i < n; ++i) {
            const int r = i - 1;
            if (r > 0) a(r, r - 1) = h(i - 1) / 6.0;
            a(r, r) = (h(i - 1) + h(i)) / 3.0;
            if (r < m - 1) a(r, r + 1) = h(i) / 6.0;
            rhs(r) = slope(i) - slope(i - 1);
        }
        const Eigen::VectorXd sol = a.partialPivLu().solve(rhs);
        for (int i = 1; i < n; ++i) moments_[i] = sol(i - 1);
    } else {
        if (std::abs(values_.front() - values_.back()) > 1e-9) {
            throw std::invalid_argument("CubicSpline1D: periodic spline needs wrapped values");
        }
        // Unknowns M_0..M_{n-1}, with M_n = M_0; cyclic tridiagonal system.
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd rhs(n);
        for (int i = 0; i < n; ++i) {
            const int prev = (i + n - 1) % n;
            const double h_prev = h(prev);
            const double h_cur = h(i);
            a(i, prev) += h_prev / 6.0;
            a(i, i) += (h_prev + h_cur) / 3.0;
            a(i, (i + 1) % n) += h_cur / 6.0;
            rhs(i) = slope(i) - slope(prev);
        }
        const Eigen::VectorXd sol = a.partialPivLu().solve(rhs);
        for (int i = 0; i < n; ++i) moments_[i] = sol(i);
        moments_[n] = moments_[0];
    }
}

int CubicSpline1D::segment(double t) const {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    int i = static_cast<int>(it - knots_.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(knots_.size()) - 2);
}

double CubicSpline1D::eval(double t) const {
    if (periodic_) {
        const double period = knots_.back() - knots_.front();
        t = knots_.front() + std::fmod(std::fmod(t - knots_.front(), period) + period, period);
    }
    const int i = segment(t);
    const double hi = knots_[i + 1] - knots_[i];
    const double a = (knots_[i + 1] - t) / hi;
    const double b = (t - knots_[i]) / hi;
    return a * values_[i] + b * values_[i + 1] +
           ((a * a * a - a) * moments_[i] + (b * b * b - b) * moments_[i + 1]) * hi * hi / 6.0;
}

double CubicSpline1D::deriv(double t) const {
    if (periodic_) {
        const double period = knots_.back() - knots_.front();
        t = knots_.front() + std::fmod(std::fmod(t - knots_.front(), period) + period, period);
    }
    const int i = segment(t);
    const double hi = knots_[i + 1] - knots_[i];
    const double a = (knots_[i + 1] - t) / hi;
    const double b = (t - knots_[i]) / hi;
    return (values_[i + 1] - values_[i]) / hi +
           ((3.0 * b * b - 1.0) * moments_[i + 1] - (3.0 * a * a - 1.0) * moments_[i]) * hi / 6.0;
}

double CubicSpline1D::deriv2(double t) const {
    if (periodic_) {
        const double period = knots_.back() - knots_.front();
        t = knots_.front() + std::fmod(std::fmod(t - knots_.front(), period) + period, period);
    }
    const int i = segment(t);
    const double hi = knots_[i + 1] - knots_[i];
    const double a = (knots_[i + 1] - t) / hi;
    const double b = (t - knots_[i]) / hi;
    return a * moments_[i] + b * moments_[i + 1];
}

CubicSpline2D::CubicSpline2D(const std::vector<Vec2>& points, bool closed) : closed_(closed) {
    std::vector<Vec2> pts = points;
    if (closed && pts.size() > 1 && (pts.front() - pts.back()).norm() < 1e-12) {
        pts.pop_back();  // wrap point is re-added below
    }
    if (pts.size() < (closed ? 3u : 2u)) {
        throw std::invalid_argument("CubicSpline2D: too few points");
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if ((pts[i] - pts[i - 1]).norm() < 1e-12) {
            throw std::invalid_argument("CubicSpline2D: duplicate consecutive points");
        }
    }
    if (closed) pts.push_back(pts.front());

    std::vector<double> t(pts.size(), 0.0);
    std::vector<double> xs(pts.size()), ys(pts.size());
    xs[0] = pts[0].x();
    ys[0] = pts[0].y();
    for (std::size_t i = 1; i < pts.size(); ++i) {
        t[i] = t[i - 1] + (pts[i] - pts[i - 1]).norm();
        xs[i] = pts[i].x();
        ys[i] = pts[i].y();
    }
    x_ = CubicSpline1D(t, xs, closed);
    y_ = CubicSpline1D(t, ys, closed);
}

Vec2 CubicSpline2D::eval(double t) const { return Vec2(x_.eval(t), y_.eval(t)); }
Vec2 CubicSpline2D::deriv(double t) const { return Vec2(x_.deriv(t), y_.deriv(t)); }
Vec2 CubicSpline2D::deriv2(double t) const { return Vec2(x_.deriv2(t), y_.deriv2(t)); }

double CubicSpline2D::heading(double t) const {
    const Vec2 d = deriv(t);
    return std::atan2(d.y(), d.x());
}

double CubicSpline2D::curvature(double t) const {
    const Vec2 d1 = deriv(t);
    const Vec2 d2 = deriv2(t);
    const double speed_sq = d1.squaredNorm();
    if (speed_sq < 1e-18) return 0.0;
    return cross2(d1, d2) / std::pow(speed_sq, 1.5);
}

namespace {

Trajectory resample_spline(const CubicSpline2D& spline, double sample_ds, bool closed) {
    // Dense parameter sweep for the arc-length table.
    const double t_max = spline.t_max();
    const double fine_dt = std::min(sample_ds, 1.0) / 20.0;
    const int n_fine = std::max(64, static_cast<int>(std::ceil(t_max / fine_dt)));
    std::vector<double> param(n_fine + 1), arc(n_fine + 1, 0.0);
    Vec2 prev = spline.eval(0.0);
    param[0] = 0.0;
    for (int i = 1; i <= n_fine; ++i) {
        param[i] = t_max * i / n_fine;
        const Vec2 cur = spline.eval(param[i]);
        arc[i] = arc[i - 1] + (cur - prev).norm();
        prev = cur;
    }
    const double total = arc.back();
    if (!(total > 0.0)) throw std::invalid_argument("fit_spline: degenerate path length");

    const int n_seg = std::max(1, static_cast<int>(std::llround(total / sample_ds)));
    const double ds = total / n_seg;
    const int n_samples = closed ? n_seg : n_seg + 1;

    Trajectory traj;
    traj.closed = closed;
    traj.points.reserve(n_samples);
    int fine_idx = 0;
    for (int k = 0; k < n_samples; ++k) {
        const double target = std::min(k * ds, total);
        while (fine_idx < n_fine && arc[fine_idx + 1] < target) ++fine_idx;
        const double seg = arc[fine_idx + 1] - arc[fine_idx];
        const double frac = seg > 0.0 ? (target - arc[fine_idx]) / seg : 0.0;
        const double t = param[fine_idx] + frac * (param[fine_idx + 1] - param[fine_idx]);

        TrajectoryPoint p;
        const Vec2 pos = spline.eval(t);
        p.x = pos.x();
        p.y = pos.y();
        p.heading = spline.heading(t);
        p.curvature = spline.curvature(t);
        traj.points.push_back(p);
    }
    return traj;
}

}  // namespace

Trajectory fit_spline(const std::vector<Vec2>& points, bool closed, double sample_ds) {
    if (points.size() < 4) throw std::invalid_argument("fit_spline: need >= 4 points");
    if (!(sample_ds > 0.0)) throw std::invalid_argument("fit_spline: sample_ds must be positive");
    const CubicSpline2D spline(points, closed);
    return resample_spline(spline, sample_ds, closed);
}

Trajectory fit_line(const std::vector<Vec2>& points, double sample_ds) {
    if (points.size() < 2) throw std::invalid_argument("fit_line: need >= 2 points");
    if (!(sample_ds > 0.0)) throw std::invalid_argument("fit_line: sample_ds must be positive");

    Vec2 centroid(0.0, 0.0);
    for (const Vec2& p : points) centroid += p;
    centroid /= static_cast<double>(points.size());

    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const Vec2& p : points) {
        const Vec2 d = p - centroid;
        cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
    if (eig.eigenvalues()(1) < 1e-18) {
        throw std::invalid_argument("fit_line: all points coincident");
    }
    Vec2 dir = eig.eigenvectors().col(1);  // dominant direction
    if (dir.dot(points.back() - points.front()) < 0.0) dir = -dir;

    const double s_start = dir.dot(points.front() - centroid);
    const double s_end = dir.dot(points.back() - centroid);
    const double total = s_end - s_start;
    if (!(total > 0.0)) throw std::invalid_argument("fit_line: degenerate extent");

    const int n_seg = std::max(1, static_cast<int>(std::llround(total / sample_ds)));
    const double ds = total / n_seg;
    const double heading = std::atan2(dir.y(), dir.x());

    Trajectory traj;
    traj.closed = false;
    traj.points.reserve(n_seg + 1);
    for (int k = 0; k <= n_seg; ++k) {
        const Vec2 pos = centroid + (s_start + k * ds) * dir;
        TrajectoryPoint p;
        p.x = pos.x();
        p.y = pos.y();
        p.heading = heading;
        p.curvature = 0.0;
        traj.points.push_back(p);
    }
    return traj;
}

}  // namespace fsd
