#include "facefuse/fusion.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "facefuse/errors.hpp"
#include "facefuse/image.hpp"

namespace facefuse {

FusionRule FusionRule::weighted(double w) {
    if (!(w >= 0.0 && w <= 1.0)) {
        throw std::invalid_argument("weighted fusion requires weight in [0,1]");
    }
    return {FusionVariant::weighted, w};
}

double FusionRule::combine(double a, double b) const {
    switch (variant) {
        case FusionVariant::average:
            return 0.5 * (a + b);
        case FusionVariant::weighted:
            // keep self-fusion and the endpoints exact
            if (a == b || weight == 1.0) return a;
            if (weight == 0.0) return b;
            return weight * a + (1.0 - weight) * b;
        case FusionVariant::max_abs:
            return std::fabs(b) > std::fabs(a) ? b : a;
    }
    return 0.0;  // unreachable
}

FusionRule fusion_rule_from_string(const std::string& text) {
    if (text == "average") return FusionRule::average();
    if (text == "maxabs") return FusionRule::max_abs();
    if (text.rfind("weighted:", 0) == 0) {
        const std::string arg = text.substr(9);
        std::size_t consumed = 0;
        double w = 0.0;
        try {
            w = std::stod(arg, &consumed);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad fusion rule '" + text + "'");
        }
        if (consumed != arg.size()) {
            throw std::invalid_argument("bad fusion rule '" + text + "'");
        }
        return FusionRule::weighted(w);
    }
    throw std::invalid_argument("unknown fusion rule '" + text +
                                "' (expected average, maxabs, or weighted:<w>)");
}

std::string to_string(const FusionRule& rule) {
    switch (rule.variant) {
        case FusionVariant::average:
            return "average";
        case FusionVariant::max_abs:
            return "maxabs";
        case FusionVariant::weighted: {
            std::ostringstream out;
            out << "weighted:" << rule.weight;
            return out.str();
        }
    }
    return "";
}

namespace {

Matrix combine_matrix(const Matrix& a, const Matrix& b, const FusionRule& rule) {
    Matrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.values[i] = rule.combine(a.values[i], b.values[i]);
    }
    return out;
}

void check_structure(const DecompositionPyramid& p, const DecompositionPyramid& q) {
    if (p.wavelet_name != q.wavelet_name) {
        throw DataError("fuse_pyramids: wavelet_name differs ('" + p.wavelet_name + "' vs '" +
                        q.wavelet_name + "')");
    }
    if (p.mode != q.mode) {
        throw DataError("fuse_pyramids: boundary_mode differs (" + to_string(p.mode) + " vs " +
                        to_string(q.mode) + ")");
    }
    if (p.levels != q.levels) {
        std::ostringstream msg;
        msg << "fuse_pyramids: levels differs (" << p.levels << " vs " << q.levels << ")";
        throw DataError(msg.str());
    }
    for (std::size_t j = 0; j < p.input_dims.size(); ++j) {
        if (p.input_dims[j] != q.input_dims[j]) {
            std::ostringstream msg;
            msg << "fuse_pyramids: level " << (j + 1) << " dims differ";
            throw DataError(msg.str());
        }
    }
}

}  // namespace

DecompositionPyramid fuse_pyramids(const DecompositionPyramid& p,
                                   const DecompositionPyramid& q,
                                   const SubbandRules& rules) {
    check_structure(p, q);
    DecompositionPyramid out;
    out.wavelet_name = p.wavelet_name;
    out.mode = p.mode;
    out.levels = p.levels;
    out.input_dims = p.input_dims;
    out.approximation = combine_matrix(p.approximation, q.approximation, rules.approximation);
    out.details.reserve(p.details.size());
    for (std::size_t j = 0; j < p.details.size(); ++j) {
        DetailTriple det;
        det.ch = combine_matrix(p.details[j].ch, q.details[j].ch, rules.horizontal);
        det.cv = combine_matrix(p.details[j].cv, q.details[j].cv, rules.vertical);
        det.cd = combine_matrix(p.details[j].cd, q.details[j].cd, rules.diagonal);
        out.details.push_back(std::move(det));
    }
    return out;
}

DecompositionPyramid fuse_pyramids(const DecompositionPyramid& p,
                                   const DecompositionPyramid& q, FusionRule rule) {
    return fuse_pyramids(p, q, SubbandRules::uniform(rule));
}

GrayImage fuse_images(const GrayImage& visual, const GrayImage& thermal,
                      const FilterBank& bank, BoundaryMode mode, int levels, FusionRule rule,
                      bool zero_ca) {
    auto [a, b] = conform_pair(visual, thermal, ConformPolicy::strict);
    const DecompositionPyramid pa = decompose(a, bank, mode, levels);
    const DecompositionPyramid pb = decompose(b, bank, mode, levels);
    DecompositionPyramid fused = fuse_pyramids(pa, pb, rule);
    if (zero_ca) fused = zero_approximation(std::move(fused));
    return reconstruct(fused, bank);
}

}  // namespace facefuse
