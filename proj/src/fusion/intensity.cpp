#include "fsdstack/fusion/intensity.hpp"

#include <Eigen/Dense>

namespace fsd {

double intensity_fit_coefficient(const std::vector<double>& layers) {
    const int n = static_cast<int>(layers.size());
    if (n < 3) {
        throw std::invalid_argument("intensity fit needs >= 3 layers, got " + std::to_string(n));
    }
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i);
        a(i, 0) = x * x;
        a(i, 1) = x;
        a(i, 2) = 1.0;
        y(i) = layers[i];
    }
    const Eigen::Vector3d coef = (a.transpose() * a).ldlt().solve(a.transpose() * y);
    return coef(0);
}

ConeColor classify_intensity(const std::vector<double>& layers, double epsilon_flat) {
    const double a = intensity_fit_coefficient(layers);
    if (std::abs(a) < epsilon_flat) return ConeColor::Unknown;
    // Blue stripes peak in the middle (concave profile), yellow dip (convex).
    return a < 0.0 ? ConeColor::Blue : ConeColor::Yellow;
}

}  // namespace fsd
