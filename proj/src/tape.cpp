#include "cogl/tape.hpp"

#include "cogl/errors.hpp"

#include <stdexcept>

namespace cogl::ad {

const Matrix& Var::value() const { return tape_->value(id_); }

Matrix& GradSink::slot(std::size_t k) {
    auto& g = grads_[inputs_[k]];
    if (!g) {
        const Matrix& v = tape_.value(inputs_[k]);
        g.emplace(v.rows(), v.cols());
    }
    return *g;
}

const Matrix& Gradients::operator[](Var v) const {
    for (const auto& [id, g] : entries_) {
        if (id == v.id()) {
            return g;
        }
    }
    throw std::out_of_range("Gradients: variable was not requested in backward()");
}

bool Gradients::contains(Var v) const {
    for (const auto& e : entries_) {
        if (e.first == v.id()) {
            return true;
        }
    }
    return false;
}

Var Tape::push(Node node) {
    nodes_.push_back(std::move(node));
    return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Matrix value) { return push({Kind::constant, std::move(value), {}, {}}); }

Var Tape::external(const Matrix& value) { return push({Kind::constant, Matrix(), {}, {}, &value}); }

Var Tape::parameter(Matrix value) { return push({Kind::parameter, std::move(value), {}, {}}); }

Var Tape::record(Matrix value, std::vector<std::size_t> inputs, BackwardFn backward) {
    for (std::size_t in : inputs) {
        if (in >= nodes_.size()) {
            throw std::logic_error("Tape::record: input does not precede its consumer");
        }
    }
    return push({Kind::op, std::move(value), std::move(inputs), std::move(backward)});
}

Gradients Tape::backward(Var loss, std::span<const Var> wrt) const {
    if (loss.tape() != this) {
        throw std::logic_error("backward: loss belongs to a different tape");
    }
    const Matrix& lv = value(loss.id());
    if (lv.rows() != 1 || lv.cols() != 1) {
        throw std::logic_error("backward: loss must be a scalar, got " + lv.shape_str());
    }

    const std::size_t n = loss.id() + 1;
    std::vector<char> relevant(n, 0);
    for (Var w : wrt) {
        if (w.tape() != this || nodes_[w.id()].kind != Kind::parameter) {
            throw std::logic_error("backward: gradients requested for a non-parameter");
        }
        if (w.id() < n) {
            relevant[w.id()] = 1;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (relevant[i]) {
            continue;
        }
        for (std::size_t in : nodes_[i].inputs) {
            if (relevant[in]) {
                relevant[i] = 1;
                break;
            }
        }
    }

    std::vector<std::optional<Matrix>> grads(n);
    Gradients out;
    if (relevant[loss.id()]) {
        grads[loss.id()].emplace(1, 1, 1.0);
        for (std::size_t i = n; i-- > 0;) {
            const Node& node = nodes_[i];
            if (node.kind != Kind::op || !relevant[i] || !grads[i]) {
                continue;
            }
            GradSink sink(node.inputs, relevant, grads, *this);
            node.backward(*grads[i], sink);
            // Free interior gradients as soon as they have been propagated.
            grads[i].reset();
        }
    }
    for (Var w : wrt) {
        const Matrix& v = value(w.id());
        if (w.id() < n && grads[w.id()]) {
            out.entries_.emplace_back(w.id(), *grads[w.id()]);
        } else {
            out.entries_.emplace_back(w.id(), Matrix(v.rows(), v.cols()));
        }
    }
    return out;
}

} // namespace cogl::ad
