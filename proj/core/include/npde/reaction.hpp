#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace npde {

enum class ReactionKind { none, fisher, sigmoid, linear, source };

/// Pointwise nonlinearity C(u). In the solver it is the additive reaction
/// term; in dense and recurrent blocks it doubles as the activation, with
/// `none` meaning the identity there.
struct ReactionSpec {
    ReactionKind kind = ReactionKind::none;
    /// fisher rate r, sigmoid gain r, or linear rate c
    double rate = 0.0;
    /// per-node source term, only used by `source`
    std::vector<double> values;

    static ReactionSpec none() { return {}; }
    static ReactionSpec fisher(double r) { return {ReactionKind::fisher, r, {}}; }
    static ReactionSpec sigmoid(double r) { return {ReactionKind::sigmoid, r, {}}; }
    static ReactionSpec linear(double c) { return {ReactionKind::linear, c, {}}; }
    static ReactionSpec source(std::vector<double> s) { return {ReactionKind::source, 0.0, std::move(s)}; }

    /// Reaction value C(u) at node `node`. `none` yields 0.
    double evaluate(double u, std::size_t node = 0) const;
    /// dC/du at node `node`.
    double derivative(double u, std::size_t node = 0) const;

    /// Activation view: identity for `none`, otherwise `evaluate`.
    double activate(double x, std::size_t node = 0) const;
    double activate_derivative(double x, std::size_t node = 0) const;

    /// Throws unless parameters are finite and a source matches `n_nodes`.
    void validate(std::size_t n_nodes) const;

    bool operator==(const ReactionSpec&) const = default;
};

std::string to_string(ReactionKind kind);
ReactionKind parse_reaction_kind(const std::string& name);

/// Logistic function 1 / (1 + exp(-x)), evaluated without overflow.
double logistic(double x);

/// Reaction pair (f(U,V), g(U,V)) for a two-component system.
struct TwoComponentReaction {
    std::string name;
    std::function<double(double, double)> f;
    std::function<double(double, double)> g;

    /// f = -U V^2 + F (1 - U),  g = U V^2 - (F + kr) V
    static TwoComponentReaction gray_scott(double feed, double kill);
    static TwoComponentReaction null();
};

} // namespace npde
