#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "plalam/latent.hpp"
#include "plalam/oracle.hpp"
#include "plalam/rng.hpp"

namespace plalam::envs {

// Axis-aligned wall rectangle; degenerate (zero-thickness) rectangles act as
// segments.
struct Wall {
  Eigen::Vector2d lo;
  Eigen::Vector2d hi;

  bool inside(const Eigen::Vector2d& p) const {  // strict interior
    return p.x() > lo.x() && p.x() < hi.x() && p.y() > lo.y() && p.y() < hi.y();
  }
};

enum class GoalKind { only, near, far };

struct Goal {
  Eigen::Vector2d pos;
  GoalKind kind = GoalKind::only;
};

enum class RewardKind {
  reach,   // -dist if unreached, else max(0.8, 1 - 0.2 steps/horizon)
  select,  // -dist(closest goal) + 1 if within 1 unit of the far goal
};

struct NavWorld {
  std::string name;
  std::vector<Wall> walls;
  Eigen::Vector2d start;
  std::vector<Goal> goals;
  double step_size = 0.1;
  int horizon = 100;
  double goal_radius = 0.5;
  bool terminate_on_goal = true;
  RewardKind reward = RewardKind::reach;
  Eigen::Vector2d domain_lo = {0.0, 0.0};
  Eigen::Vector2d domain_hi = {1.0, 1.0};

  const Goal& primary_goal() const;  // the `only` goal, or the far one
};

struct Trajectory {
  std::vector<Eigen::Vector2d> positions;  // one per step, frozen after termination
  int steps_used = 0;                      // steps taken before termination
  bool reached = false;
  double value = 0.0;
};

// Kinematic point-mass step: the action is clipped to Euclidean norm
// step_size, then motion along pos -> pos+action stops 1e-6 short of the
// first wall hit. Walls are never penetrated.
Eigen::Vector2d nav_step(const NavWorld& world, const Eigen::Vector2d& pos,
                         Eigen::Vector2d action);

double nav_reward(const NavWorld& world, const Trajectory& traj);

// Unpacks x (dim 2*horizon, entries in [-1,1] scaled by step_size) into a
// trajectory. After goal termination the position freezes; remaining steps
// still emit the frozen position so downstream features have fixed length.
Trajectory simulate(const NavWorld& world, const Eigen::VectorXd& x);

NavWorld make_maze_s3(SplitRng& rng);
NavWorld make_four_rooms(SplitRng& rng);
NavWorld make_select_obj(SplitRng& rng);

nlohmann::json nav_world_to_json(const NavWorld& world);

// Sequence-transformation surrogate: hidden action chains pay off when their
// actions appear in order; every action outside a paid embedding costs
// base_cost.
struct Chain {
  std::vector<int> actions;
  double payoff = 0.0;
};

struct SeqOrderWorld {
  int n_actions = 16;
  int horizon = 20;
  std::vector<Chain> chains;
  double base_cost = 0.1;
};

SeqOrderWorld make_seq_order(SplitRng& rng);

double seqorder_reward(const SeqOrderWorld& world, const std::vector<int>& actions);

// Per-step argmax over the action block of x (dim horizon * n_actions),
// ties to the lowest action index.
std::vector<int> decode_actions(const SeqOrderWorld& world, const Eigen::VectorXd& x);

// Prefix action histograms, one per step.
std::vector<Eigen::VectorXd> seqorder_states(const SeqOrderWorld& world,
                                             const std::vector<int>& actions);

nlohmann::json seq_order_to_json(const SeqOrderWorld& world);

// Analytic multimodal objectives, maximization form.
double deceptive_twin(const Eigen::VectorXd& x, const Eigen::Vector2d& near_pt,
                      const Eigen::Vector2d& far_pt);
double neg_rastrigin(const Eigen::VectorXd& x);
double neg_ackley(const Eigen::VectorXd& x);

// Uniform interface the runner and CLI drive. Implementations are immutable
// after construction and evaluate is pure, so instances are safe to share
// across threads.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual const std::string& name() const = 0;
  virtual int dim() const = 0;
  virtual std::optional<BoxBounds> bounds() const = 0;
  virtual double evaluate(const Eigen::VectorXd& x) const = 0;
  // Intermediate states of the rollout for trajectory featurization;
  // defaults to the single state {x} for stateless objectives.
  virtual std::vector<Eigen::VectorXd> rollout_states(const Eigen::VectorXd& x) const;
  virtual bool success(double value) const = 0;
  virtual int default_snapshot_stride() const { return 1; }
  virtual nlohmann::json describe() const = 0;
};

// Partition features from subsampled rollout states. stride <= 0 picks the
// environment default. The output dimension is fixed per environment because
// rollouts always run to the horizon (positions freeze after termination).
class TrajectoryEncoder final : public latent::PartitionEncoder {
 public:
  explicit TrajectoryEncoder(const Environment& env, int stride = 0);
  int out_dim() const override { return out_dim_; }
  Eigen::VectorXd encode(const Eigen::VectorXd& x) const override;

 private:
  const Environment& env_;
  int stride_;
  int out_dim_;
};

// Registered names: maze_s3, four_rooms, select_obj, seq_order,
// deceptive_twin, rastrigin, ackley. World randomness (maze layout, start,
// goals, chains, attractor rotation) is drawn from `rng`; dim applies to
// rastrigin/ackley only.
std::unique_ptr<Environment> make_env(const std::string& name, SplitRng& rng,
                                      int dim = 2);

std::vector<std::string> env_names();

}  // namespace plalam::envs
