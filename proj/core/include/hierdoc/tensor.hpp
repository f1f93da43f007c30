#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hierdoc/rng.hpp"

namespace hierdoc::nn {

/// Dense row-major array of doubles. Operations treat rank-1 tensors as a
/// single row; everything produced by an op is rank 2.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor scalar(double v) { return Tensor({1, 1}, std::vector<double>{v}); }
  static Tensor row(std::vector<double> values);
  static Tensor matrix(std::size_t rows, std::size_t cols, double fill = 0.0) { return Tensor({rows, cols}, fill); }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  std::size_t rows() const;
  std::size_t cols() const;
  bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  /// Scalar value of a one-element tensor.
  double item() const;
  void fill(double v);
  bool same_shape(const Tensor& other) const { return rows() == other.rows() && cols() == other.cols(); }
  std::string shape_str() const;

  bool requires_grad = false;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

/// A learned weight with its gradient accumulator.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, Tensor v);
  void zero_grad() { grad.fill(0.0); }
};

class Tape;

/// Handle to a node on a tape. Cheap to copy.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::uint32_t id) : tape_(tape), id_(id) {}

  const Tensor& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  double item() const { return value().item(); }
  Tape* tape() const { return tape_; }
  std::uint32_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  Tape* tape_ = nullptr;
  std::uint32_t id_ = 0;
};

/// Define-by-run gradient tape. Nodes are appended in evaluation order, so
/// reverse creation order is a reverse topological order. A tape belongs to a
/// single thread.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::uint32_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  /// Leaf bound to a parameter; gradients accumulate into `p.grad`. Memoized per tape.
  Var param(Parameter& p);
  Var record(Tensor value, std::vector<std::uint32_t> inputs, const char* op, BackwardFn backward);

  const Tensor& value(std::uint32_t id) const;
  bool needs_grad(std::uint32_t id) const { return nodes_[id].needs_grad; }
  /// Gradient accumulator of a node, allocated (zeroed) on first use.
  Tensor& grad(std::uint32_t id);
  const char* op(std::uint32_t id) const { return nodes_[id].op; }

  /// Seeds d(loss)/d(loss) = 1 and runs every recorded vector-Jacobian product
  /// once in reverse order. Throws ShapeError for a non-scalar loss. The graph is
  /// released afterwards.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }
  void clear();

  /// Extra per-node storage for ops that cache intermediates (e.g. the fused GRU step).
  std::vector<double>& scratch(std::uint32_t id) { return nodes_[id].scratch; }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    Parameter* param = nullptr;
    std::vector<std::uint32_t> inputs;
    BackwardFn backward;
    std::vector<double> scratch;
    const char* op = "leaf";
    bool needs_grad = false;
    bool grad_ready = false;
  };
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, std::uint32_t> param_nodes_;
};

// ---------------------------------------------------------------------------
// Core op set. Every op checks shapes and raises ShapeError naming the op.

Var matmul(Var a, Var b);
Var transpose(Var a);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
/// a [m x n] + bias [1 x n] broadcast over rows.
Var add_bias(Var a, Var bias);
/// s [1 x 1] times every element of a.
Var scale_by(Var s, Var a);
Var scale(Var a, double s);
Var add_scalar(Var a, double s);
/// 1 - a
Var one_minus(Var a);
Var sigmoid(Var a);
Var tanh(Var a);
Var relu(Var a);
Var exp(Var a);
Var log(Var a);
/// log(max(a, floor)); the gradient is zero where the floor is active.
Var log_clamped(Var a, double floor);
/// axis 1: normalise each row; axis 0: normalise each column.
Var softmax(Var a, int axis);
Var concat(std::span<const Var> parts, int axis);
Var concat(std::initializer_list<Var> parts, int axis);
Var slice(Var a, int axis, std::size_t begin, std::size_t end);
Var element(Var a, std::size_t r, std::size_t c);
/// Rows of `table` selected by `ids`.
Var embedding_gather(Var table, std::span<const std::int32_t> ids);
/// a [R x S] scattered into [R x out_cols]: out[r][index[i]] += a[r][i].
Var scatter_add_cols(Var a, std::span<const std::int32_t> index, std::size_t out_cols);
/// s [R x 1] times each row of a [R x n].
Var scale_rows(Var s, Var a);
/// [1 x R] holding a[r][cols[r]].
Var pick(Var a, std::span<const std::int32_t> cols);
/// Inverted dropout: identity when !train or p == 0, otherwise zero with
/// probability p and scale survivors by 1/(1-p).
Var dropout(Var a, double p, Rng& rng, bool train);
Var sum(Var a, int axis);
Var mean(Var a, int axis);
Var sum_all(Var a);

// ---------------------------------------------------------------------------
// Recurrent building blocks (PyTorch gate layout r, z, n).

struct GruWeights {
  Parameter* w_x = nullptr;  // in x 3h
  Parameter* w_h = nullptr;  // h x 3h
  Parameter* b_x = nullptr;  // 1 x 3h
  Parameter* b_h = nullptr;  // 1 x 3h
  std::size_t hidden() const { return w_h->value.rows(); }
  std::size_t input() const { return w_x->value.rows(); }
};

/// Fused GRU update from a pre-projected input row gx = x W_x + b_x [1 x 3h].
Var gru_step(Var gx, Var h_prev, Var w_h, Var b_h);
/// One GRU cell from raw input x [1 x in].
Var gru_cell(Tape& tape, Var x, Var h_prev, const GruWeights& w);
/// The same cell composed from primitive ops; kept as an independent route for checking gru_step.
Var gru_cell_reference(Tape& tape, Var x, Var h_prev, const GruWeights& w);

struct BiGruOutput {
  Var states;                   // T x 2h, forward ⧺ backward per step (top layer)
  std::vector<Var> final_fwd;   // per layer, 1 x h
  std::vector<Var> final_bwd;   // per layer, 1 x h
};

/// Multi-layer bidirectional GRU over the rows of `inputs` [T x in]. Layer l>0
/// consumes the concatenated states of layer l-1; dropout is applied between layers.
BiGruOutput bigru_encode(Tape& tape, Var inputs, std::span<const GruWeights> fwd, std::span<const GruWeights> bwd,
                         double dropout_p, Rng* rng, bool train);

// ---------------------------------------------------------------------------

struct AdamState {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t step = 0;
  std::vector<Tensor> m;
  std::vector<Tensor> v;
};

/// Bias-corrected Adam update of every parameter from its `grad`. Throws
/// DivergedError if any gradient is NaN/Inf (parameters left untouched).
void adam_step(std::span<Parameter* const> params, AdamState& state);

/// Central-difference check of d(f)/d(params). `f` must rebuild the graph on the
/// given tape and return a scalar. Returns the maximum relative error
/// |analytic - numeric| / max(|analytic|, |numeric|, floor).
double grad_check(const std::function<Var(Tape&)>& f, std::span<Parameter* const> params, double eps = 1e-5,
                  double floor = 1e-6);

struct GradCheckReport {
  double max_rel = 0.0;
  double max_abs = 0.0;
  std::string worst;  // "name[index]" of the largest relative error
  std::size_t entries = 0;
};

GradCheckReport grad_check_report(const std::function<Var(Tape&)>& f, std::span<Parameter* const> params,
                                  double eps = 1e-5, double floor = 1e-6);

}  // namespace hierdoc::nn
