#include "npde/reaction.hpp"

#include <cmath>
#include <stdexcept>

#include "npde/error.hpp"

namespace npde {

double logistic(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double ReactionSpec::evaluate(double u, std::size_t node) const {
    switch (kind) {
    case ReactionKind::none: return 0.0;
    case ReactionKind::fisher: return rate * u * (1.0 - u);
    case ReactionKind::sigmoid: return logistic(rate * u);
    case ReactionKind::linear: return rate * u;
    case ReactionKind::source: return values.at(node);
    }
    return 0.0;
}

double ReactionSpec::derivative(double u, std::size_t /*node*/) const {
    switch (kind) {
    case ReactionKind::none: return 0.0;
    case ReactionKind::fisher: return rate * (1.0 - 2.0 * u);
    case ReactionKind::sigmoid: {
        const double s = logistic(rate * u);
        return rate * s * (1.0 - s);
    }
    case ReactionKind::linear: return rate;
    case ReactionKind::source: return 0.0;
    }
    return 0.0;
}

double ReactionSpec::activate(double x, std::size_t node) const {
    if (kind == ReactionKind::none) return x;
    if (kind == ReactionKind::source) return x + values.at(node);
    return evaluate(x, node);
}

double ReactionSpec::activate_derivative(double x, std::size_t node) const {
    if (kind == ReactionKind::none || kind == ReactionKind::source) return 1.0;
    return derivative(x, node);
}

void ReactionSpec::validate(std::size_t n_nodes) const {
    if (!std::isfinite(rate)) {
        throw std::invalid_argument("reaction rate must be finite");
    }
    if (kind == ReactionKind::source) {
        if (values.size() != n_nodes) {
            throw ShapeError("source term has " + std::to_string(values.size()) +
                             " entries, grid has " + std::to_string(n_nodes));
        }
        for (double v : values) {
            if (!std::isfinite(v)) throw std::invalid_argument("source term must be finite");
        }
    }
}

std::string to_string(ReactionKind kind) {
    switch (kind) {
    case ReactionKind::none: return "none";
    case ReactionKind::fisher: return "fisher";
    case ReactionKind::sigmoid: return "sigmoid";
    case ReactionKind::linear: return "linear";
    case ReactionKind::source: return "source";
    }
    return "unknown";
}

ReactionKind parse_reaction_kind(const std::string& name) {
    if (name == "none") return ReactionKind::none;
    if (name == "fisher") return ReactionKind::fisher;
    if (name == "sigmoid") return ReactionKind::sigmoid;
    if (name == "linear") return ReactionKind::linear;
    if (name == "source") return ReactionKind::source;
    throw std::invalid_argument("unknown reaction kind '" + name + "'");
}

TwoComponentReaction TwoComponentReaction::gray_scott(double feed, double kill) {
    if (!std::isfinite(feed) || !std::isfinite(kill)) {
        throw std::invalid_argument("gray-scott parameters must be finite");
    }
    return {"gray_scott",
            [feed](double u, double v) { return -u * v * v + feed * (1.0 - u); },
            [feed, kill](double u, double v) { return u * v * v - (feed + kill) * v; }};
}

TwoComponentReaction TwoComponentReaction::null() {
    return {"null", [](double, double) { return 0.0; }, [](double, double) { return 0.0; }};
}

} // namespace npde
