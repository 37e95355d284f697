#include "hsivi/diffcore/tape.hpp"

#include <algorithm>
#include <cmath>

#include "hsivi/diffcore/gemm.hpp"
#include "hsivi/errors.hpp"

namespace hsivi::diffcore {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }
double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

bool same_shape(const Tensor& a, const Tensor& b) {
  return a.shape() == b.shape();
}

Tensor finish(Tape* tape, Op op, const Tensor& a, const Tensor& b, Tensor out,
              double c0 = 0.0, int i0 = 0, int i1 = 0) {
  if (tape != nullptr && (a.on_tape() || b.on_tape())) {
    Tape::Node nd;
    nd.op = op;
    nd.a = a.node();
    nd.b = b.node();
    nd.va = a.detached();
    nd.vb = b.detached();
    nd.out = out.detached();
    nd.c0 = c0;
    nd.i0 = i0;
    nd.i1 = i1;
    out.set_node(tape->record(std::move(nd)));
  }
  return out;
}

Tensor finish1(Tape* tape, Op op, const Tensor& a, Tensor out, double c0 = 0.0,
               int i0 = 0, int i1 = 0) {
  return finish(tape, op, a, Tensor(), std::move(out), c0, i0, i1);
}

Tensor unary_map(Tape* tape, Op op, const Tensor& x, double (*f)(double)) {
  Tensor out = Tensor::zeros(x.shape());
  const auto& xv = x.values();
  auto& ov = out.values();
  for (size_t i = 0; i < xv.size(); ++i) ov[i] = f(xv[i]);
  return finish1(tape, op, x, std::move(out));
}

}  // namespace

Tensor Tape::leaf(const std::string& name, const Tensor& value) {
  Node nd;
  nd.op = Op::kLeaf;
  nd.out = value.detached();
  nd.pname = name;
  Tensor leased = value.detached();
  leased.set_node(record(std::move(nd)));
  return leased;
}

int Tape::record(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

// ---------------------------------------------------------------------------
// Forward ops
// ---------------------------------------------------------------------------

Tensor add(Tape* tape, const Tensor& a, const Tensor& b) {
  if (b.numel() == 1 && a.numel() != 1) {
    Tensor out = Tensor::zeros(a.shape());
    const double s = b.at(0);
    for (size_t i = 0; i < a.numel(); ++i) out.values()[i] = a.at(i) + s;
    return finish(tape, Op::kAddScalar, a, b, std::move(out));
  }
  require(same_shape(a, b), "add: shape mismatch " + a.shape_str() + " vs " +
                                b.shape_str());
  Tensor out = Tensor::zeros(a.shape());
  for (size_t i = 0; i < a.numel(); ++i) out.values()[i] = a.at(i) + b.at(i);
  return finish(tape, Op::kAdd, a, b, std::move(out));
}

Tensor sub(Tape* tape, const Tensor& a, const Tensor& b) {
  if (b.numel() == 1 && a.numel() != 1) {
    Tensor out = Tensor::zeros(a.shape());
    const double s = b.at(0);
    for (size_t i = 0; i < a.numel(); ++i) out.values()[i] = a.at(i) - s;
    return finish(tape, Op::kSubScalar, a, b, std::move(out));
  }
  require(same_shape(a, b), "sub: shape mismatch " + a.shape_str() + " vs " +
                                b.shape_str());
  Tensor out = Tensor::zeros(a.shape());
  for (size_t i = 0; i < a.numel(); ++i) out.values()[i] = a.at(i) - b.at(i);
  return finish(tape, Op::kSub, a, b, std::move(out));
}

Tensor mul(Tape* tape, const Tensor& a, const Tensor& b) {
  if (b.numel() == 1 && a.numel() != 1) {
    Tensor out = Tensor::zeros(a.shape());
    const double s = b.at(0);
    for (size_t i = 0; i < a.numel(); ++i) out.values()[i] = a.at(i) * s;
    return finish(tape, Op::kMulScalar, a, b, std::move(out));
  }
  require(same_shape(a, b), "mul: shape mismatch " + a.shape_str() + " vs " +
                                b.shape_str());
  Tensor out = Tensor::zeros(a.shape());
  for (size_t i = 0; i < a.numel(); ++i) out.values()[i] = a.at(i) * b.at(i);
  return finish(tape, Op::kMul, a, b, std::move(out));
}

Tensor matmul(Tape* tape, const Tensor& a, const Tensor& b) {
  require(a.rank() == 2 && b.rank() == 2,
          "matmul: operands must be rank-2, got " + a.shape_str() + " and " +
              b.shape_str());
  require(a.dim(1) == b.dim(0), "matmul: inner dimensions differ, " +
                                    a.shape_str() + " vs " + b.shape_str());
  const int m = a.dim(0), k = a.dim(1), n = b.dim(1);
  Tensor out = Tensor::zeros({m, n});
  detail::gemm_nn(a.values().data(), b.values().data(), out.values().data(), m,
                  k, n);
  return finish(tape, Op::kMatmul, a, b, std::move(out));
}

Tensor dot(Tape* tape, const Tensor& a, const Tensor& b) {
  require(a.rank() == 1 && b.rank() == 1 && a.dim(0) == b.dim(0),
          "dot: expects equal-length vectors");
  double acc = 0.0;
  for (size_t i = 0; i < a.numel(); ++i) acc += a.at(i) * b.at(i);
  return finish(tape, Op::kDot, a, b, Tensor::scalar(acc));
}

Tensor add_rowvec(Tape* tape, const Tensor& x, const Tensor& v) {
  require(x.rank() == 2 && v.rank() == 1 && v.dim(0) == x.dim(1),
          "add_rowvec: X " + x.shape_str() + " vs v " + v.shape_str());
  const int rows = x.dim(0), cols = x.dim(1);
  Tensor out = Tensor::zeros(x.shape());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      out.values()[static_cast<size_t>(i) * cols + j] = x.at(i, j) + v.at(j);
  return finish(tape, Op::kAddRowVec, x, v, std::move(out));
}

Tensor mul_rowvec(Tape* tape, const Tensor& x, const Tensor& v) {
  require(x.rank() == 2 && v.rank() == 1 && v.dim(0) == x.dim(1),
          "mul_rowvec: X " + x.shape_str() + " vs v " + v.shape_str());
  const int rows = x.dim(0), cols = x.dim(1);
  Tensor out = Tensor::zeros(x.shape());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      out.values()[static_cast<size_t>(i) * cols + j] = x.at(i, j) * v.at(j);
  return finish(tape, Op::kMulRowVec, x, v, std::move(out));
}

Tensor add_colvec(Tape* tape, const Tensor& x, const Tensor& u) {
  require(x.rank() == 2 && u.rank() == 1 && u.dim(0) == x.dim(0),
          "add_colvec: X " + x.shape_str() + " vs u " + u.shape_str());
  const int rows = x.dim(0), cols = x.dim(1);
  Tensor out = Tensor::zeros(x.shape());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      out.values()[static_cast<size_t>(i) * cols + j] = x.at(i, j) + u.at(i);
  return finish(tape, Op::kAddColVec, x, u, std::move(out));
}

Tensor mul_colvec(Tape* tape, const Tensor& x, const Tensor& u) {
  require(x.rank() == 2 && u.rank() == 1 && u.dim(0) == x.dim(0),
          "mul_colvec: X " + x.shape_str() + " vs u " + u.shape_str());
  const int rows = x.dim(0), cols = x.dim(1);
  Tensor out = Tensor::zeros(x.shape());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      out.values()[static_cast<size_t>(i) * cols + j] = x.at(i, j) * u.at(i);
  return finish(tape, Op::kMulColVec, x, u, std::move(out));
}

Tensor logaddexp(Tape* tape, const Tensor& a, const Tensor& b) {
  require(same_shape(a, b), "logaddexp: shape mismatch");
  Tensor out = Tensor::zeros(a.shape());
  for (size_t i = 0; i < a.numel(); ++i) {
    const double hi = std::max(a.at(i), b.at(i));
    const double lo = std::min(a.at(i), b.at(i));
    out.values()[i] = hi + std::log1p(std::exp(lo - hi));
  }
  return finish(tape, Op::kLogAddExp, a, b, std::move(out));
}

Tensor scale(Tape* tape, const Tensor& x, double c) {
  Tensor out = Tensor::zeros(x.shape());
  for (size_t i = 0; i < x.numel(); ++i) out.values()[i] = c * x.at(i);
  return finish1(tape, Op::kScale, x, std::move(out), c);
}

Tensor add_const(Tape* tape, const Tensor& x, double c) {
  Tensor out = Tensor::zeros(x.shape());
  for (size_t i = 0; i < x.numel(); ++i) out.values()[i] = x.at(i) + c;
  return finish1(tape, Op::kAddConst, x, std::move(out), c);
}

Tensor neg(Tape* tape, const Tensor& x) { return scale(tape, x, -1.0); }

Tensor exp(Tape* tape, const Tensor& x) {
  return unary_map(tape, Op::kExp, x, [](double v) { return std::exp(v); });
}

Tensor log(Tape* tape, const Tensor& x) {
  for (size_t i = 0; i < x.numel(); ++i)
    if (!(x.at(i) > 0.0))
      throw DomainError("log: non-positive input " + std::to_string(x.at(i)));
  return unary_map(tape, Op::kLog, x, [](double v) { return std::log(v); });
}

Tensor square(Tape* tape, const Tensor& x) {
  return unary_map(tape, Op::kSquare, x, [](double v) { return v * v; });
}

Tensor relu(Tape* tape, const Tensor& x) {
  return unary_map(tape, Op::kRelu, x,
                   [](double v) { return v > 0.0 ? v : 0.0; });
}

Tensor gelu(Tape* tape, const Tensor& x) {
  return unary_map(tape, Op::kGelu, x,
                   [](double v) { return v * norm_cdf(v); });
}

Tensor sum(Tape* tape, const Tensor& x) {
  double acc = 0.0;
  for (size_t i = 0; i < x.numel(); ++i) acc += x.at(i);
  return finish1(tape, Op::kSum, x, Tensor::scalar(acc));
}

Tensor mean(Tape* tape, const Tensor& x) {
  double acc = 0.0;
  for (size_t i = 0; i < x.numel(); ++i) acc += x.at(i);
  return finish1(tape, Op::kMean, x,
                 Tensor::scalar(acc / static_cast<double>(x.numel())));
}

Tensor row_sum(Tape* tape, const Tensor& x) {
  require(x.rank() == 2, "row_sum: expects rank-2 input");
  const int rows = x.dim(0), cols = x.dim(1);
  Tensor out = Tensor::zeros({rows});
  for (int i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (int j = 0; j < cols; ++j) acc += x.at(i, j);
    out.values()[static_cast<size_t>(i)] = acc;
  }
  return finish1(tape, Op::kRowSum, x, std::move(out));
}

Tensor slice_cols(Tape* tape, const Tensor& x, int j0, int len) {
  require(x.rank() == 2, "slice_cols: expects rank-2 input");
  require(j0 >= 0 && len >= 1 && j0 + len <= x.dim(1),
          "slice_cols: range out of bounds");
  const int rows = x.dim(0);
  Tensor out = Tensor::zeros({rows, len});
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < len; ++j)
      out.values()[static_cast<size_t>(i) * len + j] = x.at(i, j0 + j);
  return finish1(tape, Op::kSliceCols, x, std::move(out), 0.0, j0, len);
}

Tensor pad_cols(Tape* tape, const Tensor& x, int left, int right) {
  require(x.rank() == 2, "pad_cols: expects rank-2 input");
  require(left >= 0 && right >= 0, "pad_cols: negative padding");
  const int rows = x.dim(0), cols = x.dim(1);
  const int ocols = left + cols + right;
  Tensor out = Tensor::zeros({rows, ocols});
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      out.values()[static_cast<size_t>(i) * ocols + left + j] = x.at(i, j);
  return finish1(tape, Op::kPadCols, x, std::move(out), 0.0, left, right);
}

Tensor broadcast1(Tape* tape, const Tensor& x, int n) {
  require(x.numel() == 1, "broadcast1: expects one-element input");
  Tensor out = Tensor::full({n}, x.at(0));
  return finish1(tape, Op::kBroadcast1, x, std::move(out), 0.0, n);
}

Tensor reshape(Tape* tape, const Tensor& x, std::vector<int> shape) {
  size_t n = 1;
  for (int e : shape) n *= static_cast<size_t>(e);
  require(n == x.numel(), "reshape: element count mismatch");
  Tensor out = Tensor::from(shape, x.values());
  return finish1(tape, Op::kReshape, x, std::move(out));
}

// ---------------------------------------------------------------------------
// Backward
// ---------------------------------------------------------------------------

namespace {

std::vector<double>& ensure(std::vector<std::vector<double>>& grads, int id,
                            size_t n) {
  auto& g = grads[static_cast<size_t>(id)];
  if (g.empty()) g.assign(n, 0.0);
  return g;
}

double total(const std::vector<double>& g) {
  double acc = 0.0;
  for (double v : g) acc += v;
  return acc;
}

}  // namespace

GradMap Tape::backward(const Tensor& root) const {
  if (!root.on_tape())
    throw ContractError("backward: root does not depend on any parameter");
  if (root.numel() != 1)
    throw ContractError("backward: root must be scalar, shape " +
                        root.shape_str());

  std::vector<std::vector<double>> grads(nodes_.size());
  grads[static_cast<size_t>(root.node())] = {1.0};
  GradMap result;

  for (int id = root.node(); id >= 0; --id) {
    std::vector<double>& g = grads[static_cast<size_t>(id)];
    if (g.empty()) continue;
    const Node& nd = nodes_[static_cast<size_t>(id)];
    const bool ga = nd.a >= 0;
    const bool gb = nd.b >= 0;

    switch (nd.op) {
      case Op::kLeaf: {
        auto it = result.find(nd.pname);
        if (it == result.end())
          it = result.emplace(nd.pname, Tensor::zeros(nd.out.shape())).first;
        auto& acc = it->second.values();
        for (size_t i = 0; i < g.size(); ++i) acc[i] += g[i];
        break;
      }
      case Op::kAdd: {
        if (ga) {
          auto& da = ensure(grads, nd.a, nd.va.numel());
          for (size_t i = 0; i < g.size(); ++i) da[i] += g[i];
        }
        if (gb) {
          auto& db = ensure(grads, nd.b, nd.vb.numel());
          for (size_t i = 0; i < g.size(); ++i) db[i] += g[i];
        }
        break;
      }
      case Op::kSub: {
        if (ga) {
          auto& da = ensure(grads, nd.a, nd.va.numel());
          for (size_t i = 0; i < g.size(); ++i) da[i] += g[i];
        }
        if (gb) {
          auto& db = ensure(grads, nd.b, nd.vb.numel());
          for (size_t i = 0; i < g.size(); ++i) db[i] -= g[i];
        }
        break;
      }
      case Op::kMul: {
        if (ga) {
          auto& da = ensure(grads, nd.a, nd.va.numel());
          for (size_t i = 0; i < g.size(); ++i) da[i] += g[i] * nd.vb.at(i);
        }
        if (gb) {
          auto& db = ensure(grads, nd.b, nd.vb.numel());
          for (size_t i = 0; i < g.size(); ++i) db[i] += g[i] * nd.va.at(i);
        }
        break;
      }
      case Op::kAddScalar: {
        if (ga) {
          auto& da = ensure(grads, nd.a, nd.va.numel());
          for (size_t i = 0; i < g.size(); ++i) da[i] += g[i];
        }
        if (gb) ensure(grads, nd.b, 1)[0] += total(g);
        break;
      }
      case Op::kSubScalar: {
        if (ga) {
          auto& da = ensure(grads, nd.a, nd.va.numel());
          for (size_t i = 0; i < g.size(); ++i) da[i] += g[i];
        }
        if (gb) ensure(grads, nd.b, 1)[0] -= total(g);
        break;
      }
      case Op::kMulScalar: {
        const double s = nd.vb.at(0);
        if (ga) {
          auto& da = ensure(grads, nd.a, nd.va.numel());
          for (size_t i = 0; i < g.size(); ++i) da[i] += g[i] * s;
        }
        if (gb) {
          double acc = 0.0;
          for (size_t i = 0; i < g.size(); ++i) acc += g[i] * nd.va.at(i);
          ensure(grads, nd.b, 1)[0] += acc;
        }
        break;
      }
      case Op::kMatmul: {
        const int m = nd.va.dim(0), k = nd.va.dim(1), n = nd.vb.dim(1);
        if (ga) {
          auto& da = ensure(grads, nd.a, nd.va.numel());
          detail::gemm_nt(g.data(), nd.vb.values().data(), da.data(), m, n, k);
        }
        if (gb) {
          auto& db = ensure(grads, nd.b, nd.vb.numel());
          detail::gemm_tn(nd.va.values().data(), g.data(), db.data(), k, m, n);
        }
        break;
      }
      case Op::kDot: {
        const double s = g[0];
        if (ga) {
          auto& da = ensure(grads, nd.a, nd.va.numel());
          for (size_t i = 0; i < da.size(); ++i) da[i] += s * nd.vb.at(i);
        }
        if (gb) {
          auto& db = ensure(grads, nd.b, nd.vb.numel());
          for (size_t i = 0; i < db.size(); ++i) db[i] += s * nd.va.at(i);
        }
        break;
      }
      case Op::kAddRowVec: {
        const int rows = nd.va.dim(0), cols = nd.va.dim(1);
        if (ga) {
          auto& da = ensure(grads, nd.a, nd.va.numel());
          for (size_t i = 0; i < g.size(); ++i) da[i] += g[i];
        }
        if (gb) {
          auto& dv = ensure(grads, nd.b, nd.vb.numel());
          for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
              dv[static_cast<size_t>(j)] += g[static_cast<size_t>(i) * cols + j];
        }
        break;
      }
      case Op::kMulRowVec: {
        const int rows = nd.va.dim(0), cols = nd.va.dim(1);
        if (ga) {
          auto& da = ensure(grads, nd.a, nd.va.numel());
          for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
              da[static_cast<size_t>(i) * cols + j] +=
                  g[static_cast<size_t>(i) * cols + j] * nd.vb.at(j);
        }
        if (gb) {
          auto& dv = ensure(grads, nd.b, nd.vb.numel());
          for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
              dv[static_cast<size_t>(j)] +=
                  g[static_cast<size_t>(i) * cols + j] * nd.va.at(i, j);
        }
        break;
      }
      case Op::kAddColVec: {
        const int rows = nd.va.dim(0), cols = nd.va.dim(1);
        if (ga) {
          auto& da = ensure(grads, nd.a, nd.va.numel());
          for (size_t i = 0; i < g.size(); ++i) da[i] += g[i];
        }
        if (gb) {
          auto& du = ensure(grads, nd.b, nd.vb.numel());
          for (int i = 0; i < rows; ++i) {
            double acc = 0.0;
            for (int j = 0; j < cols; ++j)
              acc += g[static_cast<size_t>(i) * cols + j];
            du[static_cast<size_t>(i)] += acc;
          }
        }
        break;
      }
      case Op::kMulColVec: {
        const int rows = nd.va.dim(0), cols = nd.va.dim(1);
        if (ga) {
          auto& da = ensure(grads, nd.a, nd.va.numel());
          for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
              da[static_cast<size_t>(i) * cols + j] +=
                  g[static_cast<size_t>(i) * cols + j] * nd.vb.at(i);
        }
        if (gb) {
          auto& du = ensure(grads, nd.b, nd.vb.numel());
          for (int i = 0; i < rows; ++i) {
            double acc = 0.0;
            for (int j = 0; j < cols; ++j)
              acc += g[static_cast<size_t>(i) * cols + j] * nd.va.at(i, j);
            du[static_cast<size_t>(i)] += acc;
          }
        }
        break;
      }
      case Op::kLogAddExp: {
        if (ga) {
          auto& da = ensure(grads, nd.a, nd.va.numel());
          for (size_t i = 0; i < g.size(); ++i)
            da[i] += g[i] * std::exp(nd.va.at(i) - nd.out.at(i));
        }
        if (gb) {
          auto& db = ensure(grads, nd.b, nd.vb.numel());
          for (size_t i = 0; i < g.size(); ++i)
            db[i] += g[i] * std::exp(nd.vb.at(i) - nd.out.at(i));
        }
        break;
      }
      case Op::kScale: {
        auto& da = ensure(grads, nd.a, nd.va.numel());
        for (size_t i = 0; i < g.size(); ++i) da[i] += nd.c0 * g[i];
        break;
      }
      case Op::kAddConst:
      case Op::kReshape: {
        auto& da = ensure(grads, nd.a, nd.va.numel());
        for (size_t i = 0; i < g.size(); ++i) da[i] += g[i];
        break;
      }
      case Op::kExp: {
        auto& da = ensure(grads, nd.a, nd.va.numel());
        for (size_t i = 0; i < g.size(); ++i) da[i] += g[i] * nd.out.at(i);
        break;
      }
      case Op::kLog: {
        auto& da = ensure(grads, nd.a, nd.va.numel());
        for (size_t i = 0; i < g.size(); ++i) da[i] += g[i] / nd.va.at(i);
        break;
      }
      case Op::kSquare: {
        auto& da = ensure(grads, nd.a, nd.va.numel());
        for (size_t i = 0; i < g.size(); ++i)
          da[i] += 2.0 * g[i] * nd.va.at(i);
        break;
      }
      case Op::kRelu: {
        auto& da = ensure(grads, nd.a, nd.va.numel());
        for (size_t i = 0; i < g.size(); ++i)
          if (nd.va.at(i) > 0.0) da[i] += g[i];
        break;
      }
      case Op::kGelu: {
        auto& da = ensure(grads, nd.a, nd.va.numel());
        for (size_t i = 0; i < g.size(); ++i) {
          const double x = nd.va.at(i);
          da[i] += g[i] * (norm_cdf(x) + x * norm_pdf(x));
        }
        break;
      }
      case Op::kSum: {
        auto& da = ensure(grads, nd.a, nd.va.numel());
        for (size_t i = 0; i < da.size(); ++i) da[i] += g[0];
        break;
      }
      case Op::kMean: {
        auto& da = ensure(grads, nd.a, nd.va.numel());
        const double s = g[0] / static_cast<double>(nd.va.numel());
        for (size_t i = 0; i < da.size(); ++i) da[i] += s;
        break;
      }
      case Op::kRowSum: {
        const int rows = nd.va.dim(0), cols = nd.va.dim(1);
        auto& da = ensure(grads, nd.a, nd.va.numel());
        for (int i = 0; i < rows; ++i)
          for (int j = 0; j < cols; ++j)
            da[static_cast<size_t>(i) * cols + j] += g[static_cast<size_t>(i)];
        break;
      }
      case Op::kSliceCols: {
        const int rows = nd.va.dim(0), cols = nd.va.dim(1);
        const int j0 = nd.i0, len = nd.i1;
        auto& da = ensure(grads, nd.a, nd.va.numel());
        for (int i = 0; i < rows; ++i)
          for (int j = 0; j < len; ++j)
            da[static_cast<size_t>(i) * cols + j0 + j] +=
                g[static_cast<size_t>(i) * len + j];
        break;
      }
      case Op::kPadCols: {
        const int rows = nd.va.dim(0), cols = nd.va.dim(1);
        const int left = nd.i0;
        const int ocols = left + cols + nd.i1;
        auto& da = ensure(grads, nd.a, nd.va.numel());
        for (int i = 0; i < rows; ++i)
          for (int j = 0; j < cols; ++j)
            da[static_cast<size_t>(i) * cols + j] +=
                g[static_cast<size_t>(i) * ocols + left + j];
        break;
      }
      case Op::kBroadcast1: {
        ensure(grads, nd.a, 1)[0] += total(g);
        break;
      }
    }
    g.clear();
    g.shrink_to_fit();
  }
  return result;
}

}  // namespace hsivi::diffcore
