#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hsivi/diffcore/tensor.hpp"

namespace hsivi::diffcore {

// Gradients keyed by parameter name.
using GradMap = std::map<std::string, Tensor>;

enum class Op : uint8_t {
  kLeaf,
  kAdd,
  kSub,
  kMul,
  kAddScalar,  // b has one element, broadcast
  kSubScalar,
  kMulScalar,
  kMatmul,
  kDot,
  kAddRowVec,
  kMulRowVec,
  kAddColVec,
  kMulColVec,
  kLogAddExp,
  kScale,
  kAddConst,
  kExp,
  kLog,
  kSquare,
  kRelu,
  kGelu,
  kSum,
  kMean,
  kRowSum,
  kSliceCols,
  kPadCols,
  kBroadcast1,
  kReshape,
};

// Append-only record of primitive operations. Nodes are stored in the order
// they were created, which is a topological order by construction; backward
// visits each node exactly once in reverse.
class Tape {
 public:
  struct Node {
    Op op;
    int a = -1;      // tape id of first input, -1 if constant
    int b = -1;      // tape id of second input, -1 if constant or unary
    Tensor va, vb;   // input values (payloads shared with the forward pass)
    Tensor out;      // output values, kept for ops whose adjoint needs them
    double c0 = 0.0; // scalar attribute (scale factor, added constant)
    int i0 = 0;      // integer attributes (slice offset, pad sizes)
    int i1 = 0;
    std::string pname;  // leaf parameter name
  };

  // Leases a named parameter onto the tape; gradients accumulate under `name`.
  Tensor leaf(const std::string& name, const Tensor& value);

  // d(root)/d(leaf) for every leaf parameter reachable from `root`.
  // Accumulation is the sum over all paths; `root` must be scalar.
  GradMap backward(const Tensor& root) const;

  size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

  int record(Node node);
  const Node& node(int id) const { return nodes_[static_cast<size_t>(id)]; }

 private:
  std::vector<Node> nodes_;
};

// Primitive operations. A null tape, or constant-only inputs, yield a
// constant result; otherwise the op is recorded for reverse-mode
// differentiation. Elementwise binary ops require matching shapes except for
// a one-element right operand, which broadcasts.
Tensor add(Tape* tape, const Tensor& a, const Tensor& b);
Tensor sub(Tape* tape, const Tensor& a, const Tensor& b);
Tensor mul(Tape* tape, const Tensor& a, const Tensor& b);
Tensor matmul(Tape* tape, const Tensor& a, const Tensor& b);
Tensor dot(Tape* tape, const Tensor& a, const Tensor& b);
// X (BxD) combined with a length-D vector per row.
Tensor add_rowvec(Tape* tape, const Tensor& x, const Tensor& v);
Tensor mul_rowvec(Tape* tape, const Tensor& x, const Tensor& v);
// X (BxD) combined with a length-B vector per column.
Tensor add_colvec(Tape* tape, const Tensor& x, const Tensor& u);
Tensor mul_colvec(Tape* tape, const Tensor& x, const Tensor& u);
// Elementwise log(exp(a) + exp(b)), computed with max subtraction.
Tensor logaddexp(Tape* tape, const Tensor& a, const Tensor& b);

Tensor scale(Tape* tape, const Tensor& x, double c);
Tensor add_const(Tape* tape, const Tensor& x, double c);
Tensor neg(Tape* tape, const Tensor& x);
Tensor exp(Tape* tape, const Tensor& x);
Tensor log(Tape* tape, const Tensor& x);
Tensor square(Tape* tape, const Tensor& x);
Tensor relu(Tape* tape, const Tensor& x);
// Exact Gaussian-CDF form x * Phi(x).
Tensor gelu(Tape* tape, const Tensor& x);
Tensor sum(Tape* tape, const Tensor& x);
Tensor mean(Tape* tape, const Tensor& x);
// (BxD) -> length-B vector of row sums.
Tensor row_sum(Tape* tape, const Tensor& x);
// Column slice [j0, j0+len) of a BxD matrix.
Tensor slice_cols(Tape* tape, const Tensor& x, int j0, int len);
// Zero-pad `left`/`right` columns onto a BxD matrix.
Tensor pad_cols(Tape* tape, const Tensor& x, int left, int right);
// One-element tensor repeated to a length-n vector.
Tensor broadcast1(Tape* tape, const Tensor& x, int n);
Tensor reshape(Tape* tape, const Tensor& x, std::vector<int> shape);

}  // namespace hsivi::diffcore
