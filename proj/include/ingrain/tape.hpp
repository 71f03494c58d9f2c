#pragma once

#include <functional>
#include <vector>

#include "ingrain/matrix.hpp"

namespace ingrain {

class Tape;

/// Handle to a node on a tape. Cheap to copy; valid only while the tape lives.
struct Var {
    Tape* tape = nullptr;
    int id = -1;

    bool valid() const { return tape != nullptr && id >= 0; }
    const Matrix& value() const;
    int rows() const { return value().rows; }
    int cols() const { return value().cols; }
};

/// Records one forward pass of dense-matrix operations and replays it in
/// reverse to accumulate gradients. One tape per forward pass; a tape must
/// not be shared across concurrent executions.
class Tape {
public:
    Var constant(Matrix m);

    Var matmul(Var a, Var b);
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);  // elementwise
    /// matrix + row vector, the only broadcast supported
    Var add_rowvec(Var a, Var bias);
    Var scale(Var a, double c);
    Var transpose(Var a);
    Var sigmoid(Var a);
    Var tanh_(Var a);
    Var relu(Var a);
    Var abs_(Var a);
    Var concat_cols(const std::vector<Var>& parts);
    Var concat_rows(const std::vector<Var>& parts);
    Var slice_rows(Var a, int row0, int nrows);
    Var slice_cols(Var a, int col0, int ncols);
    Var softmax_rows(Var a);
    Var layer_norm(Var a, Var gain, Var bias, double eps);
    Var mean_all(Var a);
    /// per-row Euclidean norm: n x k -> n x 1
    Var row_norms(Var a);

    /// Reverse pass from a scalar (1x1) loss node. Gradients of all nodes are
    /// reset first; nodes not reachable from the loss keep zero gradient.
    void backward(Var loss);

    const Matrix& value(Var v) const { return nodes_[v.id].value; }
    const Matrix& grad(Var v) const { return nodes_[v.id].grad; }
    size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        Matrix value;
        Matrix grad;
        std::function<void()> back;  // empty for leaves
    };
    std::vector<Node> nodes_;

    Var push(Matrix value, std::function<void()> back = {});
    Matrix& g(int id) { return nodes_[id].grad; }
    const Matrix& val(int id) const { return nodes_[id].value; }
    void require_same_tape(Var v) const;
};

inline const Matrix& Var::value() const { return tape->value(*this); }

}  // namespace ingrain
