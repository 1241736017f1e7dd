#include "fsdstack/slam/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace fsd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Eigen::Matrix2d measurement_noise(const SlamConfig& cfg) {
    Eigen::Matrix2d r = Eigen::Matrix2d::Zero();
    r(0, 0) = cfg.meas_noise_range * cfg.meas_noise_range;
    r(1, 1) = cfg.meas_noise_bearing * cfg.meas_noise_bearing;
    return r;
}

struct Prediction {
    double range;
    double bearing;
    Eigen::Matrix2d h_landmark;              // d(r,b)/d(lx,ly)
    Eigen::Matrix<double, 2, 3> h_pose;      // d(r,b)/d(px,py,ptheta)
};

Prediction predict_measurement(const Pose2D& pose, const Vec2& landmark) {
    const double dx = landmark.x() - pose.x;
    const double dy = landmark.y() - pose.y;
    const double q = dx * dx + dy * dy;
    const double r = std::sqrt(q);
    Prediction p;
    p.range = r;
    p.bearing = wrap_angle(std::atan2(dy, dx) - pose.theta);
    if (q < 1e-12) {
        p.h_landmark = Eigen::Matrix2d::Identity();
        p.h_pose = Eigen::Matrix<double, 2, 3>::Zero();
        return p;
    }
    p.h_landmark << dx / r, dy / r, -dy / q, dx / q;
    p.h_pose << -dx / r, -dy / r, 0.0, dy / q, -dx / q, -1.0;
    return p;
}

double gaussian_likelihood(const Eigen::Vector2d& innovation, const Eigen::Matrix2d& s) {
    const double det = s.determinant();
    if (det <= 0.0) return 0.0;
    const double mahal = innovation.dot(s.inverse() * innovation);
    return std::exp(-0.5 * mahal) / (2.0 * M_PI * std::sqrt(det));
}

bool colors_compatible(ConeColor a, ConeColor b) {
    return a == ConeColor::Unknown || b == ConeColor::Unknown || a == b;
}

struct Association {
    std::optional<int> id;
    double min_mahalanobis = std::numeric_limits<double>::infinity();
};

Association associate_impl(const Particle& particle, const ConeObservation& z,
                           const SlamConfig& cfg) {
    Association result;
    const Eigen::Matrix2d noise = measurement_noise(cfg);
    // Coarse Euclidean gate keeps the quadratic form evaluations cheap.
    const double coarse = z.range + 5.0 * (cfg.meas_noise_range + 1.0);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [id, lm] : particle.landmarks) {
        if (std::abs(lm.mean.x() - particle.pose.x) > coarse ||
            std::abs(lm.mean.y() - particle.pose.y) > coarse) {
            continue;
        }
        const Prediction pred = predict_measurement(particle.pose, lm.mean);
        const Eigen::Matrix2d s =
            pred.h_landmark * lm.covariance * pred.h_landmark.transpose() + noise;
        const Eigen::Vector2d innovation(z.range - pred.range,
                                         wrap_angle(z.bearing - pred.bearing));
        const double det = s.determinant();
        if (det <= 0.0) continue;
        const double d2 = innovation.dot(s.inverse() * innovation);
        result.min_mahalanobis = std::min(result.min_mahalanobis, d2);
        if (d2 <= cfg.association_gate && d2 < best && colors_compatible(lm.color, z.color)) {
            best = d2;
            result.id = id;
        }
    }
    return result;
}

/// Joseph-form EKF update of a landmark estimate; keeps the covariance SPD.
void ekf_update_landmark(LandmarkEstimate& lm, const Pose2D& pose, const ConeObservation& z,
                         const Eigen::Matrix2d& noise) {
    const Prediction pred = predict_measurement(pose, lm.mean);
    const Eigen::Matrix2d& h = pred.h_landmark;
    const Eigen::Matrix2d s = h * lm.covariance * h.transpose() + noise;
    const Eigen::Vector2d innovation(z.range - pred.range, wrap_angle(z.bearing - pred.bearing));
    const Eigen::Matrix2d k = lm.covariance * h.transpose() * s.inverse();
    lm.mean += k * innovation;
    const Eigen::Matrix2d ikh = Eigen::Matrix2d::Identity() - k * h;
    lm.covariance = ikh * lm.covariance * ikh.transpose() + k * noise * k.transpose();
    lm.covariance = 0.5 * (lm.covariance + lm.covariance.transpose());
    ++lm.hit_count;
    if (lm.color == ConeColor::Unknown) lm.color = z.color;
}

LandmarkEstimate initialize_landmark(const Pose2D& pose, const ConeObservation& z,
                                     const Eigen::Matrix2d& noise, int step) {
    const double heading = pose.theta + z.bearing;
    LandmarkEstimate lm;
    lm.mean = Vec2(pose.x + z.range * std::cos(heading), pose.y + z.range * std::sin(heading));
    Eigen::Matrix2d j;
    j << std::cos(heading), -z.range * std::sin(heading), std::sin(heading),
        z.range * std::cos(heading);
    lm.covariance = j * noise * j.transpose();
    lm.color = z.color;
    lm.hit_count = 1;
    lm.born_at_step = step;
    return lm;
}

Eigen::Matrix3d motion_covariance(const Pose2D& pose, const OdometryInput& u,
                                  const SlamConfig& cfg) {
    // Map odometry noise through the motion Jacobian; the model determines
    // the effective step parameters.
    double v = u.v, omega = u.omega, scale_v = 1.0, scale_w = 1.0;
    if (cfg.motion_model == MotionModel::Conventional) {
        v = u.v * u.dt;
        omega = 0.5 * u.omega * u.dt;
        scale_v = u.dt;
        scale_w = 0.5 * u.dt;
    }
    Eigen::Matrix<double, 3, 2> j;
    const double a = pose.theta + omega;
    j << std::cos(a), -v * std::sin(a), std::sin(a), v * std::cos(a), 0.0, 2.0;
    Eigen::Matrix2d q = Eigen::Matrix2d::Zero();
    q(0, 0) = std::pow(cfg.motion_noise_v * scale_v, 2);
    q(1, 1) = std::pow(cfg.motion_noise_omega * scale_w, 2);
    Eigen::Matrix3d p = j * q * j.transpose();
    p += 1e-9 * Eigen::Matrix3d::Identity();
    return p;
}

}  // namespace

void SlamConfig::validate() const {
    if (n_particles < 1) throw std::invalid_argument("SlamConfig: n_particles >= 1");
    if (!(motion_noise_v > 0) || !(motion_noise_omega > 0) || !(meas_noise_range > 0) ||
        !(meas_noise_bearing > 0)) {
        throw std::invalid_argument("SlamConfig: noise std devs must be positive");
    }
    if (!(association_gate > 0)) throw std::invalid_argument("SlamConfig: gate must be positive");
    if (resample_trigger < 0 || resample_trigger > 1) {
        throw std::invalid_argument("SlamConfig: resample_trigger in [0, 1]");
    }
}

Pose2D apply_motion(const Pose2D& pose, double v, double omega, double dt, MotionModel model) {
    if (model == MotionModel::Conventional) {
        // Midpoint unicycle: theta += omega dt, displacement v dt along the
        // half-advanced heading. Equivalent to the verbatim form with
        // v_step = v dt, omega_step = omega dt / 2.
        v *= dt;
        omega *= 0.5 * dt;
    }
    const double a = pose.theta + omega;
    return Pose2D(pose.x + v * std::cos(a), pose.y + v * std::sin(a),
                  pose.theta + 2.0 * omega);
}

void predict(std::vector<Particle>& particles, const OdometryInput& u, const SlamConfig& cfg,
             std::mt19937_64& rng) {
    if (particles.empty()) throw std::invalid_argument("predict: empty particle set");
    if (!(u.dt > 0)) throw std::invalid_argument("predict: dt must be positive");
    const std::uint64_t draw = rng();
    for (std::size_t i = 0; i < particles.size(); ++i) {
        std::mt19937_64 sub(splitmix64(draw ^ splitmix64(static_cast<std::uint64_t>(i))));
        std::normal_distribution<double> nv(u.v, cfg.motion_noise_v);
        std::normal_distribution<double> nw(u.omega, cfg.motion_noise_omega);
        const double v = nv(sub);
        const double w = nw(sub);
        particles[i].pose = apply_motion(particles[i].pose, v, w, u.dt, cfg.motion_model);
    }
}

std::optional<int> associate(const Particle& particle, const ConeObservation& z,
                             const SlamConfig& cfg) {
    return associate_impl(particle, z, cfg).id;
}

UpdateResult update(std::vector<Particle>& particles,
                    const std::vector<ConeObservation>& observations, const SlamConfig& cfg,
                    std::mt19937_64& rng, const UpdateOptions& opts) {
    (void)rng;  // deterministic mean refinement; sampling noise already in predict
    if (particles.empty()) throw std::invalid_argument("update: empty particle set");
    UpdateResult result;
    const Eigen::Matrix2d noise = measurement_noise(cfg);

    for (Particle& particle : particles) {
        double log_weight_factor = 0.0;

        if (cfg.proposal == ProposalMode::FastSlam2) {
            // Pose-space EKF refinement against the matched landmarks; the
            // weight uses the predictive likelihood (pose prior included).
            OdometryInput prior_u = opts.last_motion.value_or(OdometryInput{0.0, 0.0, 1.0});
            Eigen::Matrix3d p = motion_covariance(particle.pose, prior_u, cfg);
            for (const ConeObservation& z : observations) {
                const auto assoc = associate_impl(particle, z, cfg);
                if (!assoc.id) continue;
                const LandmarkEstimate& lm = particle.landmarks.at(*assoc.id);
                const Prediction pred = predict_measurement(particle.pose, lm.mean);
                const Eigen::Matrix2d s_lm =
                    pred.h_landmark * lm.covariance * pred.h_landmark.transpose() + noise;
                const Eigen::Matrix2d s = pred.h_pose * p * pred.h_pose.transpose() + s_lm;
                const Eigen::Vector2d innovation(z.range - pred.range,
                                                 wrap_angle(z.bearing - pred.bearing));
                const double lik = gaussian_likelihood(innovation, s);
                log_weight_factor += std::log(std::max(lik, 1e-300));

                const Eigen::Matrix<double, 3, 2> k =
                    p * pred.h_pose.transpose() * s.inverse();
                const Eigen::Vector3d dx = k * innovation;
                particle.pose =
                    Pose2D(particle.pose.x + dx(0), particle.pose.y + dx(1),
                           particle.pose.theta + dx(2));
                p = (Eigen::Matrix3d::Identity() - k * pred.h_pose) * p;
                p = 0.5 * (p + p.transpose());
            }
        }

        for (const ConeObservation& z : observations) {
            const auto assoc = associate_impl(particle, z, cfg);
            if (assoc.id) {
                LandmarkEstimate& lm = particle.landmarks.at(*assoc.id);
                if (cfg.proposal == ProposalMode::FastSlam1) {
                    const Prediction pred = predict_measurement(particle.pose, lm.mean);
                    const Eigen::Matrix2d s =
                        pred.h_landmark * lm.covariance * pred.h_landmark.transpose() + noise;
                    const Eigen::Vector2d innovation(z.range - pred.range,
                                                     wrap_angle(z.bearing - pred.bearing));
                    const double lik = gaussian_likelihood(innovation, s);
                    log_weight_factor += std::log(std::max(lik, 1e-300));
                }
                ekf_update_landmark(lm, particle.pose, z, noise);
            } else if (assoc.min_mahalanobis > cfg.new_landmark_gate) {
                int next_id = particle.landmarks.empty()
                                  ? 0
                                  : particle.landmarks.rbegin()->first + 1;
                particle.landmarks.emplace(
                    next_id, initialize_landmark(particle.pose, z, noise, opts.step));
                // New-landmark factor: the likelihood peak at the freshly
                // initialized covariance, discounted by e^-2 so particles
                // that can explain z with an existing landmark win.
                const Eigen::Matrix2d s0 = 2.0 * noise;
                const double peak = 1.0 / (2.0 * M_PI * std::sqrt(s0.determinant()));
                log_weight_factor += std::log(std::max(peak * std::exp(-2.0), 1e-300));
            }
            // Ambiguous observations (inside the creation gate but outside
            // the association gate) are dropped.
        }

        // Spurious-landmark prune.
        for (auto it = particle.landmarks.begin(); it != particle.landmarks.end();) {
            if (it->second.hit_count == 1 && opts.step - it->second.born_at_step > cfg.prune_age) {
                it = particle.landmarks.erase(it);
            } else {
                ++it;
            }
        }

        particle.weight *= std::exp(log_weight_factor);
    }

    double total = 0.0;
    for (const Particle& p : particles) total += p.weight;
    if (!(total > 0.0) || !std::isfinite(total)) {
        result.degenerate = true;
        const double uniform = 1.0 / static_cast<double>(particles.size());
        for (Particle& p : particles) p.weight = uniform;
    } else {
        for (Particle& p : particles) p.weight /= total;
    }
    return result;
}

double effective_sample_size(const std::vector<Particle>& particles) {
    double sum_sq = 0.0;
    for (const Particle& p : particles) sum_sq += p.weight * p.weight;
    if (sum_sq <= 0.0) return 0.0;
    return 1.0 / sum_sq;
}

bool resample(std::vector<Particle>& particles, const SlamConfig& cfg, std::mt19937_64& rng) {
    const std::size_t n = particles.size();
    if (n == 0) throw std::invalid_argument("resample: empty particle set");
    const double ess = effective_sample_size(particles);
    if (!cfg.always_resample && ess >= cfg.resample_trigger * static_cast<double>(n)) {
        return false;
    }

    std::uniform_real_distribution<double> uniform(0.0, 1.0 / static_cast<double>(n));
    const double u0 = uniform(rng);
    std::vector<Particle> next;
    next.reserve(n);
    double cumulative = particles[0].weight;
    std::size_t idx = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double target = u0 + static_cast<double>(k) / static_cast<double>(n);
        while (cumulative < target && idx + 1 < n) {
            ++idx;
            cumulative += particles[idx].weight;
        }
        next.push_back(particles[idx]);
        next.back().weight = 1.0 / static_cast<double>(n);
    }
    particles = std::move(next);
    return true;
}

std::size_t best_particle_index(const std::vector<Particle>& particles) {
    if (particles.empty()) throw std::invalid_argument("best_estimate: empty particle set");
    std::size_t best = 0;
    for (std::size_t i = 1; i < particles.size(); ++i) {
        if (particles[i].weight > particles[best].weight) best = i;  // ties keep lowest index
    }
    return best;
}

std::pair<Pose2D, std::vector<Cone>> best_estimate(const std::vector<Particle>& particles) {
    const Particle& p = particles[best_particle_index(particles)];
    std::vector<Cone> cones;
    cones.reserve(p.landmarks.size());
    for (const auto& [id, lm] : p.landmarks) cones.emplace_back(lm.mean, lm.color);
    return {p.pose, cones};
}

ConeObservation measure_landmark(const Pose2D& pose, const Vec2& landmark) {
    const double dx = landmark.x() - pose.x;
    const double dy = landmark.y() - pose.y;
    return ConeObservation(std::hypot(dx, dy), wrap_angle(std::atan2(dy, dx) - pose.theta));
}

ParticleFilter::ParticleFilter(const SlamConfig& cfg, const Pose2D& initial_pose,
                               std::uint64_t seed)
    : cfg_(cfg), rng_(seed) {
    cfg_.validate();
    particles_.resize(cfg.n_particles);
    const double uniform = 1.0 / static_cast<double>(cfg.n_particles);
    for (Particle& p : particles_) {
        p.pose = initial_pose;
        p.weight = uniform;
    }
    last_ess_ = static_cast<double>(cfg.n_particles);
}

void ParticleFilter::predict_step(const OdometryInput& u) {
    predict(particles_, u, cfg_, rng_);
    last_motion_ = u;
}

UpdateResult ParticleFilter::update_step(const std::vector<ConeObservation>& observations) {
    ++step_;
    UpdateOptions opts;
    opts.step = step_;
    opts.last_motion = last_motion_;
    const UpdateResult r = update(particles_, observations, cfg_, rng_, opts);
    last_ess_ = effective_sample_size(particles_);
    return r;
}

bool ParticleFilter::maybe_resample() { return resample(particles_, cfg_, rng_); }

void ParticleFilter::reseed(const Pose2D& pose, const std::map<int, LandmarkEstimate>& landmarks) {
    const double uniform = 1.0 / static_cast<double>(particles_.size());
    for (Particle& p : particles_) {
        p.pose = pose;
        p.landmarks = landmarks;
        p.weight = uniform;
    }
    last_ess_ = static_cast<double>(particles_.size());
}

}  // namespace fsd
