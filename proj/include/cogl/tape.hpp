#pragma once

#include "cogl/matrix.hpp"

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace cogl::ad {

class Tape;

/// Handle to a value recorded on a tape. Cheap to copy; valid while the tape lives.
class Var {
public:
    Var() = default;

    const Matrix& value() const;
    std::size_t rows() const { return value().rows(); }
    std::size_t cols() const { return value().cols(); }

    std::size_t id() const noexcept { return id_; }
    Tape* tape() const noexcept { return tape_; }
    bool valid() const noexcept { return tape_ != nullptr; }

private:
    friend class Tape;
    Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

    Tape* tape_ = nullptr;
    std::size_t id_ = 0;
};

/// Receives input gradients from a node's backward rule.
///
/// `wants(k)` is false for inputs with no path to any requested parameter;
/// rules should skip the corresponding work.
class GradSink {
public:
    GradSink(std::span<const std::size_t> inputs, std::span<const char> relevant,
             std::vector<std::optional<Matrix>>& grads, const Tape& tape)
        : inputs_(inputs), relevant_(relevant), grads_(grads), tape_(tape) {}

    bool wants(std::size_t k) const { return relevant_[inputs_[k]] != 0; }
    /// Gradient slot of input k, zero-initialized on first access.
    Matrix& slot(std::size_t k);

private:
    std::span<const std::size_t> inputs_;
    std::span<const char> relevant_;
    std::vector<std::optional<Matrix>>& grads_;
    const Tape& tape_;
};

using BackwardFn = std::function<void(const Matrix& grad_out, GradSink& sink)>;

/// Gradients of a scalar loss with respect to a set of parameter leaves.
class Gradients {
public:
    const Matrix& operator[](Var v) const;
    bool contains(Var v) const;

private:
    friend class Tape;
    std::vector<std::pair<std::size_t, Matrix>> entries_;
};

/// Test hook that corrupts one backward rule; used as a negative control for gradient checking.
enum class Fault { none, relu_backward };

/// Reverse-mode record of dense-matrix operations.
///
/// Nodes are appended in evaluation order, so inputs always precede their
/// consumers. One tape belongs to one thread; do not share in-flight tapes.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    /// Leaf that never receives a gradient.
    Var constant(Matrix value);
    /// Constant leaf that refers to `value` without copying it. The referent
    /// must outlive the tape.
    Var external(const Matrix& value);
    /// Leaf that may be differentiated against.
    Var parameter(Matrix value);
    /// Append an operation node. Used by the op library.
    Var record(Matrix value, std::vector<std::size_t> inputs, BackwardFn backward);

    const Matrix& value(std::size_t id) const {
        const Node& n = nodes_[id];
        return n.external != nullptr ? *n.external : n.value;
    }
    std::size_t size() const noexcept { return nodes_.size(); }
    bool is_parameter(Var v) const { return nodes_[v.id()].kind == Kind::parameter; }

    /// Reverse sweep from `loss` (must be 1x1) to the listed parameter leaves.
    /// Consumers of the same node accumulate additively. Does not mutate the tape,
    /// so repeated calls give bit-identical results.
    Gradients backward(Var loss, std::span<const Var> wrt) const;
    Gradients backward(Var loss, std::initializer_list<Var> wrt) const {
        return backward(loss, std::span<const Var>(wrt.begin(), wrt.size()));
    }

    void inject_fault(Fault f) noexcept { fault_ = f; }
    Fault fault() const noexcept { return fault_; }

private:
    enum class Kind { constant, parameter, op };
    struct Node {
        Kind kind;
        Matrix value;
        std::vector<std::size_t> inputs;
        BackwardFn backward;
        const Matrix* external = nullptr;
    };

    Var push(Node node);

    std::deque<Node> nodes_;
    Fault fault_ = Fault::none;
};

} // namespace cogl::ad
