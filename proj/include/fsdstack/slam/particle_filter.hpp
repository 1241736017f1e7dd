#ifndef FSDSTACK_SLAM_PARTICLE_FILTER_HPP
#define FSDSTACK_SLAM_PARTICLE_FILTER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fsdstack/types.hpp"

namespace fsd {

/// Per-landmark EKF state inside a particle.
struct LandmarkEstimate {
    Vec2 mean{0.0, 0.0};
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity();
    ConeColor color = ConeColor::Unknown;
    int hit_count = 1;
    int born_at_step = 0;
};

struct Particle {
    Pose2D pose;
    double weight = 1.0;
    std::map<int, LandmarkEstimate> landmarks;
};

/// Odometry between filter steps. Under the verbatim motion model v and
/// omega are per-step quantities (dt is ignored); the conventional model
/// treats them as rates and integrates over dt.
struct OdometryInput {
    double v = 0.0;
    double omega = 0.0;
    double dt = 1.0;
};

enum class MotionModel { Verbatim, Conventional };
enum class ProposalMode { FastSlam1, FastSlam2 };

struct SlamConfig {
    int n_particles = 100;
    double motion_noise_v = 0.05;
    double motion_noise_omega = 0.02;
    double meas_noise_range = 0.1;       // m
    double meas_noise_bearing = 0.0175;  // rad
    double association_gate = 9.21;      // Mahalanobis^2, chi-square 99% at 2 dof
    double new_landmark_gate = 9.21;     // min distance^2 to every landmark before creating
    double resample_trigger = 0.5;       // ESS fraction of n_particles
    bool always_resample = false;
    MotionModel motion_model = MotionModel::Verbatim;
    ProposalMode proposal = ProposalMode::FastSlam2;
    int prune_age = 10;  // steps a single-hit landmark survives

    void validate() const;
};

/// Applies the configured motion model to a pose with the given (possibly
/// noise-perturbed) odometry.
Pose2D apply_motion(const Pose2D& pose, double v, double omega, double dt, MotionModel model);

/// Samples the motion model per particle. Weights are unchanged. Each
/// particle draws from its own substream keyed by (draw, index) so that a
/// parallel implementation would produce identical output.
void predict(std::vector<Particle>& particles, const OdometryInput& u, const SlamConfig& cfg,
             std::mt19937_64& rng);

/// Maximum-likelihood association in measurement space. Returns the landmark
/// id with minimal Mahalanobis distance when it passes the gate and the
/// colors are compatible (Unknown matches anything); nullopt = new landmark.
std::optional<int> associate(const Particle& particle, const ConeObservation& z,
                             const SlamConfig& cfg);

struct UpdateOptions {
    int step = 0;  // filter step index, used by the spurious-landmark prune
    std::optional<OdometryInput> last_motion;  // FastSLAM2 pose prior
};

struct UpdateResult {
    bool degenerate = false;  // all weights underflowed; reset to uniform
};

/// Per-particle measurement update: associate, EKF-update or initialize each
/// landmark, accumulate the measurement likelihood into the weight, then
/// renormalize. FastSLAM2 first refines the particle pose with a pose-space
/// EKF step against the matched landmarks.
UpdateResult update(std::vector<Particle>& particles,
                    const std::vector<ConeObservation>& observations, const SlamConfig& cfg,
                    std::mt19937_64& rng, const UpdateOptions& opts = {});

/// Effective sample size 1 / sum(w^2) of normalized weights.
double effective_sample_size(const std::vector<Particle>& particles);

/// Systematic (low-variance) resampling, executed only when the ESS drops
/// below trigger * n (or unconditionally with always_resample). Returns true
/// when a resample happened; weights are uniform afterwards.
bool resample(std::vector<Particle>& particles, const SlamConfig& cfg, std::mt19937_64& rng);

/// Pose and landmark means of the highest-weight particle (ties -> lowest
/// particle index).
std::pair<Pose2D, std::vector<Cone>> best_estimate(const std::vector<Particle>& particles);
std::size_t best_particle_index(const std::vector<Particle>& particles);

/// Exact range-bearing measurement of a landmark from a pose.
ConeObservation measure_landmark(const Pose2D& pose, const Vec2& landmark);

/// Stateful convenience wrapper driving the free functions with a seeded
/// master generator and a step counter.
class ParticleFilter {
public:
    ParticleFilter(const SlamConfig& cfg, const Pose2D& initial_pose, std::uint64_t seed);

    void predict_step(const OdometryInput& u);
    UpdateResult update_step(const std::vector<ConeObservation>& observations);
    bool maybe_resample();

    const std::vector<Particle>& particles() const { return particles_; }
    std::vector<Particle>& particles() { return particles_; }
    const SlamConfig& config() const { return cfg_; }
    int step() const { return step_; }
    double last_ess() const { return last_ess_; }

    std::pair<Pose2D, std::vector<Cone>> estimate() const { return best_estimate(particles_); }

    /// Replaces every particle with the given pose/map (uniform weights);
    /// used after a graph optimization re-seeds the filter.
    void reseed(const Pose2D& pose, const std::map<int, LandmarkEstimate>& landmarks);

private:
    SlamConfig cfg_;
    std::vector<Particle> particles_;
    std::mt19937_64 rng_;
    int step_ = 0;
    double last_ess_ = 0.0;
    std::optional<OdometryInput> last_motion_;
};

}  // namespace fsd

#endif  // FSDSTACK_SLAM_PARTICLE_FILTER_HPP
