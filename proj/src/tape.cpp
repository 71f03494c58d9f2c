#include "ingrain/tape.hpp"

#include <cmath>

namespace ingrain {

Var Tape::push(Matrix value, std::function<void()> back) {
    nodes_.push_back(Node{std::move(value), Matrix(), std::move(back)});
    return Var{this, static_cast<int>(nodes_.size() - 1)};
}

void Tape::require_same_tape(Var v) const {
    if (v.tape != this) throw ContractError("Var belongs to a different tape");
}

Var Tape::constant(Matrix m) { return push(std::move(m)); }

Var Tape::matmul(Var a, Var b) {
    require_same_tape(a);
    require_same_tape(b);
    const Matrix& A = val(a.id);
    const Matrix& B = val(b.id);
    if (A.cols != B.rows)
        throw DimensionError("matmul: " + A.shape_str() + " x " + B.shape_str());
    const int n = A.rows, k = A.cols, m = B.cols;
    Matrix C(n, m);
    for (int i = 0; i < n; ++i) {
        const double* arow = &A.v[static_cast<size_t>(i) * k];
        double* crow = &C.v[static_cast<size_t>(i) * m];
        for (int p = 0; p < k; ++p) {
            const double aip = arow[p];
            if (aip == 0.0) continue;
            const double* brow = &B.v[static_cast<size_t>(p) * m];
            for (int j = 0; j < m; ++j) crow[j] += aip * brow[j];
        }
    }
    const int ai = a.id, bi = b.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, bi, out, n, k, m]() {
        const Matrix& G = g(out);
        const Matrix& A2 = val(ai);
        const Matrix& B2 = val(bi);
        Matrix& dA = g(ai);
        Matrix& dB = g(bi);
        // dA = G * B^T
        for (int i = 0; i < n; ++i)
            for (int p = 0; p < k; ++p) {
                double s = 0.0;
                const double* grow = &G.v[static_cast<size_t>(i) * m];
                const double* brow = &B2.v[static_cast<size_t>(p) * m];
                for (int j = 0; j < m; ++j) s += grow[j] * brow[j];
                dA.v[static_cast<size_t>(i) * k + p] += s;
            }
        // dB = A^T * G
        for (int p = 0; p < k; ++p) {
            double* dbrow = &dB.v[static_cast<size_t>(p) * m];
            for (int i = 0; i < n; ++i) {
                const double aip = A2.v[static_cast<size_t>(i) * k + p];
                if (aip == 0.0) continue;
                const double* grow = &G.v[static_cast<size_t>(i) * m];
                for (int j = 0; j < m; ++j) dbrow[j] += aip * grow[j];
            }
        }
    });
}

Var Tape::add(Var a, Var b) {
    require_same_tape(a);
    require_same_tape(b);
    const Matrix& A = val(a.id);
    const Matrix& B = val(b.id);
    if (!A.same_shape(B))
        throw DimensionError("add: " + A.shape_str() + " vs " + B.shape_str());
    Matrix C = A;
    for (size_t i = 0; i < C.size(); ++i) C.v[i] += B.v[i];
    const int ai = a.id, bi = b.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, bi, out]() {
        const Matrix& G = g(out);
        Matrix& dA = g(ai);
        Matrix& dB = g(bi);
        for (size_t i = 0; i < G.size(); ++i) {
            dA.v[i] += G.v[i];
            dB.v[i] += G.v[i];
        }
    });
}

Var Tape::sub(Var a, Var b) {
    require_same_tape(a);
    require_same_tape(b);
    const Matrix& A = val(a.id);
    const Matrix& B = val(b.id);
    if (!A.same_shape(B))
        throw DimensionError("sub: " + A.shape_str() + " vs " + B.shape_str());
    Matrix C = A;
    for (size_t i = 0; i < C.size(); ++i) C.v[i] -= B.v[i];
    const int ai = a.id, bi = b.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, bi, out]() {
        const Matrix& G = g(out);
        Matrix& dA = g(ai);
        Matrix& dB = g(bi);
        for (size_t i = 0; i < G.size(); ++i) {
            dA.v[i] += G.v[i];
            dB.v[i] -= G.v[i];
        }
    });
}

Var Tape::mul(Var a, Var b) {
    require_same_tape(a);
    require_same_tape(b);
    const Matrix& A = val(a.id);
    const Matrix& B = val(b.id);
    if (!A.same_shape(B))
        throw DimensionError("mul: " + A.shape_str() + " vs " + B.shape_str());
    Matrix C = A;
    for (size_t i = 0; i < C.size(); ++i) C.v[i] *= B.v[i];
    const int ai = a.id, bi = b.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, bi, out]() {
        const Matrix& G = g(out);
        const Matrix& A2 = val(ai);
        const Matrix& B2 = val(bi);
        Matrix& dA = g(ai);
        Matrix& dB = g(bi);
        for (size_t i = 0; i < G.size(); ++i) {
            dA.v[i] += G.v[i] * B2.v[i];
            dB.v[i] += G.v[i] * A2.v[i];
        }
    });
}

Var Tape::add_rowvec(Var a, Var bias) {
    require_same_tape(a);
    require_same_tape(bias);
    const Matrix& A = val(a.id);
    const Matrix& B = val(bias.id);
    if (B.rows != 1 || B.cols != A.cols)
        throw DimensionError("add_rowvec: " + A.shape_str() + " vs " + B.shape_str());
    Matrix C = A;
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) C.at(i, j) += B.v[j];
    const int ai = a.id, bi = bias.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, bi, out]() {
        const Matrix& G = g(out);
        Matrix& dA = g(ai);
        Matrix& dB = g(bi);
        for (size_t i = 0; i < G.size(); ++i) dA.v[i] += G.v[i];
        for (int i = 0; i < G.rows; ++i)
            for (int j = 0; j < G.cols; ++j) dB.v[j] += G.at(i, j);
    });
}

Var Tape::scale(Var a, double c) {
    require_same_tape(a);
    Matrix C = val(a.id);
    for (double& e : C.v) e *= c;
    const int ai = a.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, out, c]() {
        const Matrix& G = g(out);
        Matrix& dA = g(ai);
        for (size_t i = 0; i < G.size(); ++i) dA.v[i] += c * G.v[i];
    });
}

Var Tape::transpose(Var a) {
    require_same_tape(a);
    const Matrix& A = val(a.id);
    Matrix C(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) C.at(j, i) = A.at(i, j);
    const int ai = a.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, out]() {
        const Matrix& G = g(out);
        Matrix& dA = g(ai);
        for (int i = 0; i < G.rows; ++i)
            for (int j = 0; j < G.cols; ++j) dA.at(j, i) += G.at(i, j);
    });
}

Var Tape::sigmoid(Var a) {
    require_same_tape(a);
    Matrix C = val(a.id);
    for (double& e : C.v) e = 1.0 / (1.0 + std::exp(-e));
    const int ai = a.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, out]() {
        const Matrix& G = g(out);
        const Matrix& Y = val(out);
        Matrix& dA = g(ai);
        for (size_t i = 0; i < G.size(); ++i) dA.v[i] += G.v[i] * Y.v[i] * (1.0 - Y.v[i]);
    });
}

Var Tape::tanh_(Var a) {
    require_same_tape(a);
    Matrix C = val(a.id);
    for (double& e : C.v) e = std::tanh(e);
    const int ai = a.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, out]() {
        const Matrix& G = g(out);
        const Matrix& Y = val(out);
        Matrix& dA = g(ai);
        for (size_t i = 0; i < G.size(); ++i) dA.v[i] += G.v[i] * (1.0 - Y.v[i] * Y.v[i]);
    });
}

Var Tape::relu(Var a) {
    require_same_tape(a);
    Matrix C = val(a.id);
    for (double& e : C.v) e = e > 0.0 ? e : 0.0;
    const int ai = a.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, out]() {
        const Matrix& G = g(out);
        const Matrix& A2 = val(ai);
        Matrix& dA = g(ai);
        for (size_t i = 0; i < G.size(); ++i)
            if (A2.v[i] > 0.0) dA.v[i] += G.v[i];
    });
}

Var Tape::abs_(Var a) {
    require_same_tape(a);
    Matrix C = val(a.id);
    for (double& e : C.v) e = std::fabs(e);
    const int ai = a.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, out]() {
        const Matrix& G = g(out);
        const Matrix& A2 = val(ai);
        Matrix& dA = g(ai);
        for (size_t i = 0; i < G.size(); ++i) {
            if (A2.v[i] > 0.0)
                dA.v[i] += G.v[i];
            else if (A2.v[i] < 0.0)
                dA.v[i] -= G.v[i];
        }
    });
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
    if (parts.empty()) throw ContractError("concat_cols: no inputs");
    int rows = val(parts[0].id).rows;
    int total = 0;
    for (Var p : parts) {
        require_same_tape(p);
        const Matrix& M = val(p.id);
        if (M.rows != rows)
            throw DimensionError("concat_cols: row mismatch " + M.shape_str());
        total += M.cols;
    }
    Matrix C(rows, total);
    std::vector<int> ids, offs;
    int off = 0;
    for (Var p : parts) {
        const Matrix& M = val(p.id);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < M.cols; ++j) C.at(i, off + j) = M.at(i, j);
        ids.push_back(p.id);
        offs.push_back(off);
        off += M.cols;
    }
    const int out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ids, offs, out]() {
        const Matrix& G = g(out);
        for (size_t p = 0; p < ids.size(); ++p) {
            Matrix& dP = g(ids[p]);
            for (int i = 0; i < dP.rows; ++i)
                for (int j = 0; j < dP.cols; ++j) dP.at(i, j) += G.at(i, offs[p] + j);
        }
    });
}

Var Tape::concat_rows(const std::vector<Var>& parts) {
    if (parts.empty()) throw ContractError("concat_rows: no inputs");
    int cols = val(parts[0].id).cols;
    int total = 0;
    for (Var p : parts) {
        require_same_tape(p);
        const Matrix& M = val(p.id);
        if (M.cols != cols)
            throw DimensionError("concat_rows: col mismatch " + M.shape_str());
        total += M.rows;
    }
    Matrix C(total, cols);
    std::vector<int> ids, offs;
    int off = 0;
    for (Var p : parts) {
        const Matrix& M = val(p.id);
        for (int i = 0; i < M.rows; ++i)
            for (int j = 0; j < cols; ++j) C.at(off + i, j) = M.at(i, j);
        ids.push_back(p.id);
        offs.push_back(off);
        off += M.rows;
    }
    const int out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ids, offs, out]() {
        const Matrix& G = g(out);
        for (size_t p = 0; p < ids.size(); ++p) {
            Matrix& dP = g(ids[p]);
            for (int i = 0; i < dP.rows; ++i)
                for (int j = 0; j < dP.cols; ++j) dP.at(i, j) += G.at(offs[p] + i, j);
        }
    });
}

Var Tape::slice_rows(Var a, int row0, int nrows) {
    require_same_tape(a);
    const Matrix& A = val(a.id);
    if (row0 < 0 || nrows < 1 || row0 + nrows > A.rows)
        throw DimensionError("slice_rows: [" + std::to_string(row0) + "," +
                             std::to_string(row0 + nrows) + ") of " + A.shape_str());
    Matrix C(nrows, A.cols);
    for (int i = 0; i < nrows; ++i)
        for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(row0 + i, j);
    const int ai = a.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, out, row0]() {
        const Matrix& G = g(out);
        Matrix& dA = g(ai);
        for (int i = 0; i < G.rows; ++i)
            for (int j = 0; j < G.cols; ++j) dA.at(row0 + i, j) += G.at(i, j);
    });
}

Var Tape::slice_cols(Var a, int col0, int ncols) {
    require_same_tape(a);
    const Matrix& A = val(a.id);
    if (col0 < 0 || ncols < 1 || col0 + ncols > A.cols)
        throw DimensionError("slice_cols: [" + std::to_string(col0) + "," +
                             std::to_string(col0 + ncols) + ") of " + A.shape_str());
    Matrix C(A.rows, ncols);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < ncols; ++j) C.at(i, j) = A.at(i, col0 + j);
    const int ai = a.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, out, col0]() {
        const Matrix& G = g(out);
        Matrix& dA = g(ai);
        for (int i = 0; i < G.rows; ++i)
            for (int j = 0; j < G.cols; ++j) dA.at(i, col0 + j) += G.at(i, j);
    });
}

Var Tape::softmax_rows(Var a) {
    require_same_tape(a);
    const Matrix& A = val(a.id);
    Matrix C(A.rows, A.cols);
    for (int i = 0; i < A.rows; ++i) {
        double mx = A.at(i, 0);
        for (int j = 1; j < A.cols; ++j) mx = std::max(mx, A.at(i, j));
        double sum = 0.0;
        for (int j = 0; j < A.cols; ++j) {
            const double e = std::exp(A.at(i, j) - mx);
            C.at(i, j) = e;
            sum += e;
        }
        for (int j = 0; j < A.cols; ++j) C.at(i, j) /= sum;
    }
    const int ai = a.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, out]() {
        const Matrix& G = g(out);
        const Matrix& Y = val(out);
        Matrix& dA = g(ai);
        for (int i = 0; i < G.rows; ++i) {
            double dot = 0.0;
            for (int j = 0; j < G.cols; ++j) dot += G.at(i, j) * Y.at(i, j);
            for (int j = 0; j < G.cols; ++j)
                dA.at(i, j) += Y.at(i, j) * (G.at(i, j) - dot);
        }
    });
}

Var Tape::layer_norm(Var a, Var gain, Var bias, double eps) {
    require_same_tape(a);
    require_same_tape(gain);
    require_same_tape(bias);
    const Matrix& A = val(a.id);
    const Matrix& Gn = val(gain.id);
    const Matrix& Bs = val(bias.id);
    if (Gn.rows != 1 || Gn.cols != A.cols || Bs.rows != 1 || Bs.cols != A.cols)
        throw DimensionError("layer_norm: params " + Gn.shape_str() + "/" + Bs.shape_str() +
                             " vs input " + A.shape_str());
    const int n = A.cols;
    Matrix C(A.rows, n);
    Matrix xhat(A.rows, n);
    std::vector<double> inv_std(A.rows);
    for (int i = 0; i < A.rows; ++i) {
        double mean = 0.0;
        for (int j = 0; j < n; ++j) mean += A.at(i, j);
        mean /= n;
        double var = 0.0;
        for (int j = 0; j < n; ++j) {
            const double d = A.at(i, j) - mean;
            var += d * d;
        }
        var /= n;
        const double s = 1.0 / std::sqrt(var + eps);
        inv_std[i] = s;
        for (int j = 0; j < n; ++j) {
            xhat.at(i, j) = (A.at(i, j) - mean) * s;
            C.at(i, j) = xhat.at(i, j) * Gn.v[j] + Bs.v[j];
        }
    }
    const int ai = a.id, gi = gain.id, bi = bias.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, gi, bi, out, xhat, inv_std, n]() {
        const Matrix& G = g(out);
        const Matrix& Gn2 = val(gi);
        Matrix& dA = g(ai);
        Matrix& dGn = g(gi);
        Matrix& dBs = g(bi);
        for (int i = 0; i < G.rows; ++i) {
            double mu = 0.0, mx = 0.0;
            for (int j = 0; j < n; ++j) {
                const double u = G.at(i, j) * Gn2.v[j];
                mu += u;
                mx += u * xhat.at(i, j);
                dGn.v[j] += G.at(i, j) * xhat.at(i, j);
                dBs.v[j] += G.at(i, j);
            }
            mu /= n;
            mx /= n;
            for (int j = 0; j < n; ++j) {
                const double u = G.at(i, j) * Gn2.v[j];
                dA.at(i, j) += (u - mu - xhat.at(i, j) * mx) * inv_std[i];
            }
        }
    });
}

Var Tape::mean_all(Var a) {
    require_same_tape(a);
    const Matrix& A = val(a.id);
    double s = 0.0;
    for (double e : A.v) s += e;
    Matrix C(1, 1);
    C.v[0] = s / static_cast<double>(A.size());
    const int ai = a.id, out = static_cast<int>(nodes_.size());
    const double inv = 1.0 / static_cast<double>(A.size());
    return push(std::move(C), [this, ai, out, inv]() {
        const double gv = g(out).v[0] * inv;
        Matrix& dA = g(ai);
        for (double& e : dA.v) e += gv;
    });
}

Var Tape::row_norms(Var a) {
    require_same_tape(a);
    const Matrix& A = val(a.id);
    Matrix C(A.rows, 1);
    for (int i = 0; i < A.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < A.cols; ++j) s += A.at(i, j) * A.at(i, j);
        C.v[i] = std::sqrt(s);
    }
    const int ai = a.id, out = static_cast<int>(nodes_.size());
    return push(std::move(C), [this, ai, out]() {
        const Matrix& G = g(out);
        const Matrix& A2 = val(ai);
        const Matrix& N = val(out);
        Matrix& dA = g(ai);
        for (int i = 0; i < A2.rows; ++i) {
            if (N.v[i] <= 0.0) continue;  // subgradient 0 at the origin
            const double c = G.v[i] / N.v[i];
            for (int j = 0; j < A2.cols; ++j) dA.at(i, j) += c * A2.at(i, j);
        }
    });
}

void Tape::backward(Var loss) {
    require_same_tape(loss);
    const Matrix& L = val(loss.id);
    if (L.rows != 1 || L.cols != 1)
        throw ContractError("backward: loss must be 1x1, got " + L.shape_str());
    for (Node& n : nodes_) n.grad = Matrix(n.value.rows, n.value.cols);
    nodes_[loss.id].grad.v[0] = 1.0;
    for (int i = loss.id; i >= 0; --i)
        if (nodes_[i].back) nodes_[i].back();
}

}  // namespace ingrain
