#include "hierdoc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hierdoc/error.hpp"

#include <Eigen/Core>

namespace hierdoc::nn {

namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

[[noreturn]] void shape_fail(const char* op, const Tensor& a, const Tensor* b = nullptr, const std::string& extra = {}) {
  std::ostringstream os;
  os << op << ": shape mismatch " << a.shape_str();
  if (b) os << " vs " << b->shape_str();
  if (!extra.empty()) os << " (" << extra << ")";
  throw ShapeError(os.str());
}

Tape& tape_of(Var a) {
  if (!a.valid()) throw UsageError("operation on an empty Var");
  return *a.tape();
}

Tape& tape_of(Var a, Var b) {
  if (a.tape() != b.tape()) throw UsageError("operands live on different tapes");
  return tape_of(a);
}

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapC = Eigen::Map<const RowMat>;
using Map = Eigen::Map<RowMat>;

// y = a * b (m x k by k x n), accumulating when acc is true.
void gemm(const double* a, const double* b, double* y, std::size_t m, std::size_t k, std::size_t n, bool acc) {
  const auto M = static_cast<Eigen::Index>(m), K = static_cast<Eigen::Index>(k), N = static_cast<Eigen::Index>(n);
  Map out(y, M, N);
  if (acc)
    out.noalias() += MapC(a, M, K) * MapC(b, K, N);
  else
    out.noalias() = MapC(a, M, K) * MapC(b, K, N);
}

// y += a * b^T (a: m x n, b: k x n, y: m x k)
void gemm_bt_acc(const double* a, const double* b, double* y, std::size_t m, std::size_t n, std::size_t k) {
  const auto M = static_cast<Eigen::Index>(m), K = static_cast<Eigen::Index>(k), N = static_cast<Eigen::Index>(n);
  Map(y, M, K).noalias() += MapC(a, M, N) * MapC(b, K, N).transpose();
}

// y += a^T * b (a: m x k, b: m x n, y: k x n)
void gemm_at_acc(const double* a, const double* b, double* y, std::size_t m, std::size_t k, std::size_t n) {
  const auto M = static_cast<Eigen::Index>(m), K = static_cast<Eigen::Index>(k), N = static_cast<Eigen::Index>(n);
  Map(y, K, N).noalias() += MapC(a, M, K).transpose() * MapC(b, M, N);
}

double sigmoid_scalar(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

template <typename Fwd, typename Deriv>
Var unary(Var a, const char* op, Fwd fwd, Deriv deriv) {
  Tape& t = tape_of(a);
  const Tensor& x = a.value();
  Tensor y({x.rows(), x.cols()});
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = fwd(x[i]);
  const auto ia = a.id();
  return t.record(std::move(y), {ia}, op, [ia, deriv](Tape& tp, std::uint32_t self) {
    if (!tp.needs_grad(ia)) return;
    const Tensor& x = tp.value(ia);
    const Tensor& y = tp.value(self);
    const Tensor& gy = tp.grad(self);
    Tensor& gx = tp.grad(ia);
    for (std::size_t i = 0; i < x.size(); ++i) gx[i] += gy[i] * deriv(x[i], y[i]);
  });
}

}  // namespace

// ---------------------------------------------------------------------------

Tensor::Tensor(std::vector<std::size_t> shape, double fill) : shape_(std::move(shape)) {
  for (auto d : shape_)
    if (d == 0) throw ShapeError("tensor dimensions must be positive");
  data_.assign(product(shape_), fill);
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  for (auto d : shape_)
    if (d == 0) throw ShapeError("tensor dimensions must be positive");
  if (data_.size() != product(shape_))
    throw ShapeError("tensor data length " + std::to_string(data_.size()) + " does not match shape " + shape_str());
}

Tensor Tensor::row(std::vector<double> values) {
  const auto n = values.size();
  return Tensor({1, n}, std::move(values));
}

std::size_t Tensor::rows() const {
  if (shape_.size() <= 1) return shape_.empty() ? 0 : 1;
  return product(shape_) / shape_.back();
}

std::size_t Tensor::cols() const { return shape_.empty() ? 0 : shape_.back(); }

double Tensor::item() const {
  if (data_.size() != 1) throw ShapeError("item() on tensor of shape " + shape_str());
  return data_[0];
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

std::string Tensor::shape_str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

Parameter::Parameter(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)) {
  value.requires_grad = true;
  grad = Tensor(value.shape(), 0.0);
}

const Tensor& Var::value() const { return tape_->value(id_); }

// ---------------------------------------------------------------------------

Var Tape::constant(Tensor value) {
  Node n;
  const auto r = value.rows(), c = value.cols();
  if (value.shape().size() != 2) value = Tensor({r, c}, std::move(value.values()));
  n.value = std::move(value);
  n.op = "const";
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

Var Tape::param(Parameter& p) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) return Var(this, it->second);
  Node n;
  n.param = &p;
  n.needs_grad = true;
  n.op = "param";
  nodes_.push_back(std::move(n));
  const auto id = static_cast<std::uint32_t>(nodes_.size() - 1);
  param_nodes_.emplace(&p, id);
  return Var(this, id);
}

Var Tape::record(Tensor value, std::vector<std::uint32_t> inputs, const char* op, BackwardFn backward) {
  Node n;
  n.value = std::move(value);
  n.op = op;
  for (auto i : inputs) n.needs_grad = n.needs_grad || nodes_[i].needs_grad;
  if (n.needs_grad) {
    n.inputs = std::move(inputs);
    n.backward = std::move(backward);
  }
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

const Tensor& Tape::value(std::uint32_t id) const {
  const Node& n = nodes_[id];
  return n.param ? n.param->value : n.value;
}

Tensor& Tape::grad(std::uint32_t id) {
  Node& n = nodes_[id];
  if (n.param) {
    if (n.param->grad.size() != n.param->value.size()) n.param->grad = Tensor(n.param->value.shape(), 0.0);
    return n.param->grad;
  }
  if (!n.grad_ready) {
    n.grad = Tensor({n.value.rows(), n.value.cols()}, 0.0);
    n.grad_ready = true;
  }
  return n.grad;
}

void Tape::backward(Var loss) {
  if (loss.tape() != this) throw UsageError("backward: loss is not on this tape");
  const Tensor& lv = value(loss.id());
  if (lv.size() != 1) throw ShapeError("backward: loss must be scalar, got " + lv.shape_str());
  if (nodes_[loss.id()].needs_grad) {
    grad(loss.id())[0] += 1.0;
    for (std::int64_t i = loss.id(); i >= 0; --i) {
      Node& n = nodes_[static_cast<std::size_t>(i)];
      if (!n.backward || !n.grad_ready) continue;
      n.backward(*this, static_cast<std::uint32_t>(i));
    }
  }
  clear();
}

void Tape::clear() {
  nodes_.clear();
  param_nodes_.clear();
}

// ---------------------------------------------------------------------------

Var matmul(Var a, Var b) {
  Tape& t = tape_of(a, b);
  const Tensor& x = a.value();
  const Tensor& w = b.value();
  if (x.cols() != w.rows()) shape_fail("matmul", x, &w);
  const std::size_t m = x.rows(), k = x.cols(), n = w.cols();
  Tensor y({m, n});
  gemm(x.data(), w.data(), y.data(), m, k, n, false);
  const auto ia = a.id(), ib = b.id();
  return t.record(std::move(y), {ia, ib}, "matmul", [ia, ib, m, k, n](Tape& tp, std::uint32_t self) {
    const Tensor& gy = tp.grad(self);
    if (tp.needs_grad(ia)) gemm_bt_acc(gy.data(), tp.value(ib).data(), tp.grad(ia).data(), m, n, k);
    if (tp.needs_grad(ib)) gemm_at_acc(tp.value(ia).data(), gy.data(), tp.grad(ib).data(), m, k, n);
  });
}

Var transpose(Var a) {
  Tape& t = tape_of(a);
  const Tensor& x = a.value();
  const std::size_t m = x.rows(), n = x.cols();
  Tensor y({n, m});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) y[j * m + i] = x[i * n + j];
  const auto ia = a.id();
  return t.record(std::move(y), {ia}, "transpose", [ia, m, n](Tape& tp, std::uint32_t self) {
    const Tensor& gy = tp.grad(self);
    Tensor& gx = tp.grad(ia);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) gx[i * n + j] += gy[j * m + i];
  });
}

namespace {
template <int Kind>  // 0 add, 1 sub, 2 mul
Var binary(Var a, Var b, const char* op) {
  Tape& t = tape_of(a, b);
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  if (!x.same_shape(z)) shape_fail(op, x, &z);
  Tensor y({x.rows(), x.cols()});
  for (std::size_t i = 0; i < x.size(); ++i) {
    if constexpr (Kind == 0) y[i] = x[i] + z[i];
    if constexpr (Kind == 1) y[i] = x[i] - z[i];
    if constexpr (Kind == 2) y[i] = x[i] * z[i];
  }
  const auto ia = a.id(), ib = b.id();
  return t.record(std::move(y), {ia, ib}, op, [ia, ib](Tape& tp, std::uint32_t self) {
    const Tensor& gy = tp.grad(self);
    const std::size_t n = gy.size();
    if (tp.needs_grad(ia)) {
      Tensor& ga = tp.grad(ia);
      if constexpr (Kind == 2) {
        const Tensor& z = tp.value(ib);
        for (std::size_t i = 0; i < n; ++i) ga[i] += gy[i] * z[i];
      } else {
        for (std::size_t i = 0; i < n; ++i) ga[i] += gy[i];
      }
    }
    if (tp.needs_grad(ib)) {
      Tensor& gb = tp.grad(ib);
      if constexpr (Kind == 2) {
        const Tensor& x = tp.value(ia);
        for (std::size_t i = 0; i < n; ++i) gb[i] += gy[i] * x[i];
      } else if constexpr (Kind == 1) {
        for (std::size_t i = 0; i < n; ++i) gb[i] -= gy[i];
      } else {
        for (std::size_t i = 0; i < n; ++i) gb[i] += gy[i];
      }
    }
  });
}
}  // namespace

Var add(Var a, Var b) { return binary<0>(a, b, "add"); }
Var sub(Var a, Var b) { return binary<1>(a, b, "sub"); }
Var mul(Var a, Var b) { return binary<2>(a, b, "mul"); }

Var add_bias(Var a, Var bias) {
  Tape& t = tape_of(a, bias);
  const Tensor& x = a.value();
  const Tensor& b = bias.value();
  if (b.rows() != 1 || b.cols() != x.cols()) shape_fail("add_bias", x, &b);
  const std::size_t m = x.rows(), n = x.cols();
  Tensor y({m, n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) y[i * n + j] = x[i * n + j] + b[j];
  const auto ia = a.id(), ib = bias.id();
  return t.record(std::move(y), {ia, ib}, "add_bias", [ia, ib, m, n](Tape& tp, std::uint32_t self) {
    const Tensor& gy = tp.grad(self);
    if (tp.needs_grad(ia)) {
      Tensor& ga = tp.grad(ia);
      for (std::size_t i = 0; i < m * n; ++i) ga[i] += gy[i];
    }
    if (tp.needs_grad(ib)) {
      Tensor& gb = tp.grad(ib);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) gb[j] += gy[i * n + j];
    }
  });
}

Var scale_by(Var s, Var a) {
  Tape& t = tape_of(s, a);
  const Tensor& sv = s.value();
  const Tensor& x = a.value();
  if (sv.size() != 1) shape_fail("scale_by", sv, &x, "scale must be 1x1");
  const double k = sv[0];
  Tensor y({x.rows(), x.cols()});
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = k * x[i];
  const auto is = s.id(), ia = a.id();
  return t.record(std::move(y), {is, ia}, "scale_by", [is, ia](Tape& tp, std::uint32_t self) {
    const Tensor& gy = tp.grad(self);
    const Tensor& x = tp.value(ia);
    if (tp.needs_grad(is)) {
      double acc = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) acc += gy[i] * x[i];
      tp.grad(is)[0] += acc;
    }
    if (tp.needs_grad(ia)) {
      const double k = tp.value(is)[0];
      Tensor& ga = tp.grad(ia);
      for (std::size_t i = 0; i < x.size(); ++i) ga[i] += gy[i] * k;
    }
  });
}

Var scale(Var a, double s) {
  return unary(a, "scale", [s](double x) { return s * x; }, [s](double, double) { return s; });
}

Var add_scalar(Var a, double s) {
  return unary(a, "add_scalar", [s](double x) { return x + s; }, [](double, double) { return 1.0; });
}

Var one_minus(Var a) {
  return unary(a, "one_minus", [](double x) { return 1.0 - x; }, [](double, double) { return -1.0; });
}

Var sigmoid(Var a) {
  return unary(a, "sigmoid", sigmoid_scalar, [](double, double y) { return y * (1.0 - y); });
}

Var tanh(Var a) {
  return unary(a, "tanh", [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Var relu(Var a) {
  return unary(a, "relu", [](double x) { return x > 0 ? x : 0.0; }, [](double x, double) { return x > 0 ? 1.0 : 0.0; });
}

Var exp(Var a) {
  return unary(a, "exp", [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Var log(Var a) {
  return unary(a, "log", [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Var log_clamped(Var a, double floor) {
  return unary(
      a, "log_clamped", [floor](double x) { return std::log(std::max(x, floor)); },
      [floor](double x, double) { return x > floor ? 1.0 / x : 0.0; });
}

Var softmax(Var a, int axis) {
  if (axis != 0 && axis != 1) throw ShapeError("softmax: axis must be 0 or 1");
  Tape& t = tape_of(a);
  const Tensor& x = a.value();
  const std::size_t m = x.rows(), n = x.cols();
  // Walk "lines" (rows for axis 1, columns for axis 0) with a stride.
  const std::size_t lines = axis == 1 ? m : n, len = axis == 1 ? n : m;
  const std::size_t line_step = axis == 1 ? n : 1, elem_step = axis == 1 ? 1 : n;
  Tensor y({m, n});
  for (std::size_t l = 0; l < lines; ++l) {
    const std::size_t base = l * line_step;
    double mx = -INFINITY;
    for (std::size_t e = 0; e < len; ++e) mx = std::max(mx, x[base + e * elem_step]);
    double s = 0.0;
    for (std::size_t e = 0; e < len; ++e) {
      const double v = std::exp(x[base + e * elem_step] - mx);
      y[base + e * elem_step] = v;
      s += v;
    }
    for (std::size_t e = 0; e < len; ++e) y[base + e * elem_step] /= s;
  }
  const auto ia = a.id();
  return t.record(std::move(y), {ia}, "softmax",
                  [ia, lines, len, line_step, elem_step](Tape& tp, std::uint32_t self) {
                    if (!tp.needs_grad(ia)) return;
                    const Tensor& y = tp.value(self);
                    const Tensor& gy = tp.grad(self);
                    Tensor& gx = tp.grad(ia);
                    for (std::size_t l = 0; l < lines; ++l) {
                      const std::size_t base = l * line_step;
                      double dot = 0.0;
                      for (std::size_t e = 0; e < len; ++e) dot += gy[base + e * elem_step] * y[base + e * elem_step];
                      for (std::size_t e = 0; e < len; ++e) {
                        const std::size_t k = base + e * elem_step;
                        gx[k] += y[k] * (gy[k] - dot);
                      }
                    }
                  });
}

Var concat(std::span<const Var> parts, int axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  if (axis != 0 && axis != 1) throw ShapeError("concat: axis must be 0 or 1");
  Tape& t = tape_of(parts[0]);
  const std::size_t r0 = parts[0].rows(), c0 = parts[0].cols();
  std::size_t total = 0;
  std::vector<std::uint32_t> ids;
  std::vector<std::size_t> extents;
  for (const Var& p : parts) {
    if (p.tape() != &t) throw UsageError("concat: operands live on different tapes");
    const Tensor& v = p.value();
    if (axis == 1 && v.rows() != r0) shape_fail("concat", parts[0].value(), &v, "axis 1");
    if (axis == 0 && v.cols() != c0) shape_fail("concat", parts[0].value(), &v, "axis 0");
    extents.push_back(axis == 1 ? v.cols() : v.rows());
    total += extents.back();
    ids.push_back(p.id());
  }
  const std::size_t m = axis == 1 ? r0 : total, n = axis == 1 ? total : c0;
  Tensor y({m, n});
  std::size_t off = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Tensor& v = parts[k].value();
    if (axis == 1) {
      for (std::size_t i = 0; i < m; ++i)
        std::copy_n(v.data() + i * extents[k], extents[k], y.data() + i * n + off);
    } else {
      std::copy_n(v.data(), v.size(), y.data() + off * n);
    }
    off += extents[k];
  }
  auto ids_copy = ids;
  return t.record(std::move(y), std::move(ids), "concat",
                  [ids = std::move(ids_copy), extents, axis, m, n](Tape& tp, std::uint32_t self) {
                    const Tensor& gy = tp.grad(self);
                    std::size_t off = 0;
                    for (std::size_t k = 0; k < ids.size(); ++k) {
                      if (tp.needs_grad(ids[k])) {
                        Tensor& g = tp.grad(ids[k]);
                        if (axis == 1) {
                          for (std::size_t i = 0; i < m; ++i)
                            for (std::size_t j = 0; j < extents[k]; ++j) g[i * extents[k] + j] += gy[i * n + off + j];
                        } else {
                          for (std::size_t i = 0; i < g.size(); ++i) g[i] += gy[off * n + i];
                        }
                      }
                      off += extents[k];
                    }
                  });
}

Var concat(std::initializer_list<Var> parts, int axis) {
  return concat(std::span<const Var>(parts.begin(), parts.size()), axis);
}

Var slice(Var a, int axis, std::size_t begin, std::size_t end) {
  Tape& t = tape_of(a);
  const Tensor& x = a.value();
  const std::size_t m = x.rows(), n = x.cols();
  const std::size_t lim = axis == 0 ? m : n;
  if ((axis != 0 && axis != 1) || begin >= end || end > lim)
    shape_fail("slice", x, nullptr,
               "axis " + std::to_string(axis) + " range " + std::to_string(begin) + ":" + std::to_string(end));
  const std::size_t w = end - begin;
  const std::size_t ym = axis == 0 ? w : m, yn = axis == 0 ? n : w;
  Tensor y({ym, yn});
  if (axis == 0) {
    std::copy_n(x.data() + begin * n, w * n, y.data());
  } else {
    for (std::size_t i = 0; i < m; ++i) std::copy_n(x.data() + i * n + begin, w, y.data() + i * w);
  }
  const auto ia = a.id();
  return t.record(std::move(y), {ia}, "slice", [ia, axis, begin, w, m, n](Tape& tp, std::uint32_t self) {
    if (!tp.needs_grad(ia)) return;
    const Tensor& gy = tp.grad(self);
    Tensor& gx = tp.grad(ia);
    if (axis == 0) {
      for (std::size_t i = 0; i < w * n; ++i) gx[begin * n + i] += gy[i];
    } else {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < w; ++j) gx[i * n + begin + j] += gy[i * w + j];
    }
  });
}

Var element(Var a, std::size_t r, std::size_t c) {
  Tape& t = tape_of(a);
  const Tensor& x = a.value();
  if (r >= x.rows() || c >= x.cols())
    shape_fail("element", x, nullptr, "index " + std::to_string(r) + "," + std::to_string(c));
  const std::size_t k = r * x.cols() + c;
  const auto ia = a.id();
  return t.record(Tensor::scalar(x[k]), {ia}, "element", [ia, k](Tape& tp, std::uint32_t self) {
    if (tp.needs_grad(ia)) tp.grad(ia)[k] += tp.grad(self)[0];
  });
}

Var embedding_gather(Var table, std::span<const std::int32_t> ids) {
  Tape& t = tape_of(table);
  const Tensor& w = table.value();
  if (ids.empty()) throw ShapeError("embedding_gather: empty id list");
  const std::size_t d = w.cols(), rows = w.rows();
  Tensor y({ids.size(), d});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= rows)
      shape_fail("embedding_gather", w, nullptr, "id " + std::to_string(ids[i]) + " out of range");
    std::copy_n(w.data() + static_cast<std::size_t>(ids[i]) * d, d, y.data() + i * d);
  }
  std::vector<std::int32_t> idv(ids.begin(), ids.end());
  const auto it = table.id();
  return t.record(std::move(y), {it}, "embedding_gather", [it, idv = std::move(idv), d](Tape& tp, std::uint32_t self) {
    if (!tp.needs_grad(it)) return;
    const Tensor& gy = tp.grad(self);
    Tensor& gw = tp.grad(it);
    for (std::size_t i = 0; i < idv.size(); ++i) {
      double* dst = gw.data() + static_cast<std::size_t>(idv[i]) * d;
      const double* src = gy.data() + i * d;
      for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
    }
  });
}

Var scatter_add_cols(Var a, std::span<const std::int32_t> index, std::size_t out_cols) {
  Tape& t = tape_of(a);
  const Tensor& x = a.value();
  if (x.cols() != index.size())
    shape_fail("scatter_add_cols", x, nullptr, "index length " + std::to_string(index.size()));
  for (auto i : index)
    if (i < 0 || static_cast<std::size_t>(i) >= out_cols)
      shape_fail("scatter_add_cols", x, nullptr, "target " + std::to_string(i) + " out of range");
  const std::size_t rows = x.rows(), n = index.size();
  Tensor y({rows, out_cols});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t i = 0; i < n; ++i) y[r * out_cols + static_cast<std::size_t>(index[i])] += x[r * n + i];
  std::vector<std::int32_t> idx(index.begin(), index.end());
  const auto ia = a.id();
  return t.record(std::move(y), {ia}, "scatter_add_cols",
                  [ia, idx = std::move(idx), rows, out_cols](Tape& tp, std::uint32_t self) {
                    if (!tp.needs_grad(ia)) return;
                    const Tensor& gy = tp.grad(self);
                    Tensor& gx = tp.grad(ia);
                    const std::size_t n = idx.size();
                    for (std::size_t r = 0; r < rows; ++r)
                      for (std::size_t i = 0; i < n; ++i)
                        gx[r * n + i] += gy[r * out_cols + static_cast<std::size_t>(idx[i])];
                  });
}

Var scale_rows(Var s, Var a) {
  Tape& t = tape_of(s, a);
  const Tensor& sv = s.value();
  const Tensor& x = a.value();
  if (sv.cols() != 1 || sv.rows() != x.rows()) shape_fail("scale_rows", sv, &x, "scale must be rows x 1");
  const std::size_t rows = x.rows(), cols = x.cols();
  Tensor y({rows, cols});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) y[r * cols + c] = sv[r] * x[r * cols + c];
  const auto is = s.id(), ia = a.id();
  return t.record(std::move(y), {is, ia}, "scale_rows", [is, ia, rows, cols](Tape& tp, std::uint32_t self) {
    const Tensor& gy = tp.grad(self);
    if (tp.needs_grad(is)) {
      const Tensor& x = tp.value(ia);
      Tensor& gs = tp.grad(is);
      for (std::size_t r = 0; r < rows; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += gy[r * cols + c] * x[r * cols + c];
        gs[r] += acc;
      }
    }
    if (tp.needs_grad(ia)) {
      const Tensor& sv = tp.value(is);
      Tensor& ga = tp.grad(ia);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) ga[r * cols + c] += gy[r * cols + c] * sv[r];
    }
  });
}

Var pick(Var a, std::span<const std::int32_t> cols) {
  Tape& t = tape_of(a);
  const Tensor& x = a.value();
  if (cols.size() != x.rows()) shape_fail("pick", x, nullptr, "index length " + std::to_string(cols.size()));
  const std::size_t n = x.cols();
  std::vector<std::size_t> flat(cols.size());
  Tensor y({1, cols.size()});
  for (std::size_t r = 0; r < cols.size(); ++r) {
    if (cols[r] < 0 || static_cast<std::size_t>(cols[r]) >= n)
      shape_fail("pick", x, nullptr, "column " + std::to_string(cols[r]) + " out of range");
    flat[r] = r * n + static_cast<std::size_t>(cols[r]);
    y[r] = x[flat[r]];
  }
  const auto ia = a.id();
  return t.record(std::move(y), {ia}, "pick", [ia, flat = std::move(flat)](Tape& tp, std::uint32_t self) {
    if (!tp.needs_grad(ia)) return;
    const Tensor& gy = tp.grad(self);
    Tensor& gx = tp.grad(ia);
    for (std::size_t r = 0; r < flat.size(); ++r) gx[flat[r]] += gy[r];
  });
}

Var dropout(Var a, double p, Rng& rng, bool train) {
  if (p < 0.0 || p >= 1.0) throw UsageError("dropout: p must be in [0,1)");
  if (!train || p == 0.0) return a;
  Tape& t = tape_of(a);
  const Tensor& x = a.value();
  const double keep = 1.0 / (1.0 - p);
  std::vector<double> mask(x.size());
  Tensor y({x.rows(), x.cols()});
  for (std::size_t i = 0; i < x.size(); ++i) {
    mask[i] = rng.uniform() < p ? 0.0 : keep;
    y[i] = x[i] * mask[i];
  }
  const auto ia = a.id();
  return t.record(std::move(y), {ia}, "dropout", [ia, mask = std::move(mask)](Tape& tp, std::uint32_t self) {
    if (!tp.needs_grad(ia)) return;
    const Tensor& gy = tp.grad(self);
    Tensor& gx = tp.grad(ia);
    for (std::size_t i = 0; i < mask.size(); ++i) gx[i] += gy[i] * mask[i];
  });
}

Var sum(Var a, int axis) {
  if (axis != 0 && axis != 1) throw ShapeError("sum: axis must be 0 or 1");
  Tape& t = tape_of(a);
  const Tensor& x = a.value();
  const std::size_t m = x.rows(), n = x.cols();
  Tensor y(axis == 0 ? std::vector<std::size_t>{1, n} : std::vector<std::size_t>{m, 1});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) y[axis == 0 ? j : i] += x[i * n + j];
  const auto ia = a.id();
  return t.record(std::move(y), {ia}, "sum", [ia, axis, m, n](Tape& tp, std::uint32_t self) {
    if (!tp.needs_grad(ia)) return;
    const Tensor& gy = tp.grad(self);
    Tensor& gx = tp.grad(ia);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) gx[i * n + j] += gy[axis == 0 ? j : i];
  });
}

Var mean(Var a, int axis) {
  const double d = static_cast<double>(axis == 0 ? a.rows() : a.cols());
  return scale(sum(a, axis), 1.0 / d);
}

Var sum_all(Var a) {
  Tape& t = tape_of(a);
  const Tensor& x = a.value();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i];
  const auto ia = a.id();
  return t.record(Tensor::scalar(s), {ia}, "sum_all", [ia](Tape& tp, std::uint32_t self) {
    if (!tp.needs_grad(ia)) return;
    const double g = tp.grad(self)[0];
    Tensor& gx = tp.grad(ia);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g;
  });
}

// ---------------------------------------------------------------------------

Var gru_step(Var gx, Var h_prev, Var w_h, Var b_h) {
  Tape& t = tape_of(gx, h_prev);
  const Tensor& gxv = gx.value();
  const Tensor& hv = h_prev.value();
  const Tensor& wv = w_h.value();
  const Tensor& bv = b_h.value();
  const std::size_t h = hv.cols();
  if (hv.rows() != 1 || gxv.rows() != 1 || gxv.cols() != 3 * h) shape_fail("gru_step", gxv, &hv);
  if (wv.rows() != h || wv.cols() != 3 * h) shape_fail("gru_step", wv, &hv, "recurrent weight");
  if (bv.size() != 3 * h) shape_fail("gru_step", bv, &hv, "recurrent bias");

  std::vector<double> gh(3 * h);
  std::copy_n(bv.data(), 3 * h, gh.data());
  gemm(hv.data(), wv.data(), gh.data(), 1, h, 3 * h, true);
  // scratch layout: r | z | n | gh_n
  std::vector<double> cache(4 * h);
  Tensor y({1, h});
  for (std::size_t j = 0; j < h; ++j) {
    const double r = sigmoid_scalar(gxv[j] + gh[j]);
    const double z = sigmoid_scalar(gxv[h + j] + gh[h + j]);
    const double n = std::tanh(gxv[2 * h + j] + r * gh[2 * h + j]);
    cache[j] = r;
    cache[h + j] = z;
    cache[2 * h + j] = n;
    cache[3 * h + j] = gh[2 * h + j];
    y[j] = (1.0 - z) * n + z * hv[j];
  }
  const auto ig = gx.id(), ih = h_prev.id(), iw = w_h.id(), ib = b_h.id();
  Var out = t.record(std::move(y), {ig, ih, iw, ib}, "gru_step", [ig, ih, iw, ib, h](Tape& tp, std::uint32_t self) {
    const std::vector<double>& c = tp.scratch(self);
    const Tensor& dy = tp.grad(self);
    const Tensor& hp = tp.value(ih);
    std::vector<double> dgh(3 * h), dgx(3 * h);
    for (std::size_t j = 0; j < h; ++j) {
      const double r = c[j], z = c[h + j], n = c[2 * h + j], ghn = c[3 * h + j];
      const double dz = dy[j] * (hp[j] - n);
      const double dn_pre = dy[j] * (1.0 - z) * (1.0 - n * n);
      const double dr_pre = dn_pre * ghn * r * (1.0 - r);
      const double dz_pre = dz * z * (1.0 - z);
      dgx[j] = dr_pre;
      dgx[h + j] = dz_pre;
      dgx[2 * h + j] = dn_pre;
      dgh[j] = dr_pre;
      dgh[h + j] = dz_pre;
      dgh[2 * h + j] = dn_pre * r;
    }
    if (tp.needs_grad(ig)) {
      Tensor& g = tp.grad(ig);
      for (std::size_t j = 0; j < 3 * h; ++j) g[j] += dgx[j];
    }
    if (tp.needs_grad(ib)) {
      Tensor& g = tp.grad(ib);
      for (std::size_t j = 0; j < 3 * h; ++j) g[j] += dgh[j];
    }
    if (tp.needs_grad(iw)) gemm_at_acc(hp.data(), dgh.data(), tp.grad(iw).data(), 1, h, 3 * h);
    if (tp.needs_grad(ih)) {
      Tensor& g = tp.grad(ih);
      for (std::size_t j = 0; j < h; ++j) g[j] += dy[j] * c[h + j];
      gemm_bt_acc(dgh.data(), tp.value(iw).data(), g.data(), 1, 3 * h, h);
    }
  });
  t.scratch(out.id()) = std::move(cache);
  return out;
}

Var gru_cell(Tape& tape, Var x, Var h_prev, const GruWeights& w) {
  if (x.cols() != w.input()) shape_fail("gru_cell", x.value(), &w.w_x->value, "input width");
  Var gx = add_bias(matmul(x, tape.param(*w.w_x)), tape.param(*w.b_x));
  return gru_step(gx, h_prev, tape.param(*w.w_h), tape.param(*w.b_h));
}

Var gru_cell_reference(Tape& tape, Var x, Var h_prev, const GruWeights& w) {
  const std::size_t h = w.hidden();
  Var gx = add_bias(matmul(x, tape.param(*w.w_x)), tape.param(*w.b_x));
  Var gh = add_bias(matmul(h_prev, tape.param(*w.w_h)), tape.param(*w.b_h));
  Var r = sigmoid(add(slice(gx, 1, 0, h), slice(gh, 1, 0, h)));
  Var z = sigmoid(add(slice(gx, 1, h, 2 * h), slice(gh, 1, h, 2 * h)));
  Var n = tanh(add(slice(gx, 1, 2 * h, 3 * h), mul(r, slice(gh, 1, 2 * h, 3 * h))));
  return add(mul(one_minus(z), n), mul(z, h_prev));
}

BiGruOutput bigru_encode(Tape& tape, Var inputs, std::span<const GruWeights> fwd, std::span<const GruWeights> bwd,
                         double dropout_p, Rng* rng, bool train) {
  if (fwd.empty() || fwd.size() != bwd.size()) throw ShapeError("bigru_encode: layer count mismatch");
  BiGruOutput out;
  Var layer_in = inputs;
  const std::size_t steps = inputs.rows();
  for (std::size_t l = 0; l < fwd.size(); ++l) {
    if (l > 0 && rng && train) layer_in = dropout(layer_in, dropout_p, *rng, train);
    std::vector<Var> fs(steps), bs(steps);
    for (int dir = 0; dir < 2; ++dir) {
      const GruWeights& w = dir == 0 ? fwd[l] : bwd[l];
      if (layer_in.cols() != w.input()) shape_fail("bigru_encode", layer_in.value(), &w.w_x->value, "layer input");
      Var gx_all = add_bias(matmul(layer_in, tape.param(*w.w_x)), tape.param(*w.b_x));
      Var wh = tape.param(*w.w_h), bh = tape.param(*w.b_h);
      Var hcur = tape.constant(Tensor::matrix(1, w.hidden()));
      for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t pos = dir == 0 ? s : steps - 1 - s;
        hcur = gru_step(slice(gx_all, 0, pos, pos + 1), hcur, wh, bh);
        (dir == 0 ? fs : bs)[pos] = hcur;
      }
      (dir == 0 ? out.final_fwd : out.final_bwd).push_back(hcur);
    }
    Var f = concat(std::span<const Var>(fs), 0);
    Var b = concat(std::span<const Var>(bs), 0);
    layer_in = concat({f, b}, 1);
  }
  out.states = layer_in;
  return out;
}

// ---------------------------------------------------------------------------

void adam_step(std::span<Parameter* const> params, AdamState& state) {
  for (const Parameter* p : params)
    for (double g : p->grad.values())
      if (!std::isfinite(g)) throw DivergedError("non-finite gradient in " + p->name);
  if (state.m.size() != params.size()) {
    state.m.clear();
    state.v.clear();
    for (const Parameter* p : params) {
      state.m.emplace_back(p->value.shape(), 0.0);
      state.v.emplace_back(p->value.shape(), 0.0);
    }
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    Tensor& m = state.m[k];
    Tensor& v = state.v[k];
    if (m.size() != p.value.size()) throw ShapeError("adam_step: moment shape mismatch for " + p.name);
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
      const double mh = m[i] / bc1;
      const double vh = v[i] / bc2;
      p.value[i] -= state.lr * mh / (std::sqrt(vh) + state.eps);
    }
  }
}

GradCheckReport grad_check_report(const std::function<Var(Tape&)>& f, std::span<Parameter* const> params, double eps,
                                  double floor) {
  for (Parameter* p : params) p->zero_grad();
  {
    Tape tape;
    Var loss = f(tape);
    tape.backward(loss);
  }
  GradCheckReport report;
  for (Parameter* p : params) {
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double orig = p->value[i];
      p->value[i] = orig + eps;
      double up, down;
      {
        Tape tape;
        up = f(tape).item();
      }
      p->value[i] = orig - eps;
      {
        Tape tape;
        down = f(tape).item();
      }
      p->value[i] = orig;
      const double numeric = (up - down) / (2.0 * eps);
      const double analytic = p->grad[i];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
      const double diff = std::abs(analytic - numeric);
      if (diff / denom > report.max_rel) {
        report.max_rel = diff / denom;
        report.worst = p->name + "[" + std::to_string(i) + "]";
      }
      report.max_abs = std::max(report.max_abs, diff);
      ++report.entries;
    }
  }
  return report;
}

double grad_check(const std::function<Var(Tape&)>& f, std::span<Parameter* const> params, double eps, double floor) {
  return grad_check_report(f, params, eps, floor).max_rel;
}

}  // namespace hierdoc::nn
