#include "facefuse/wavelet.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "facefuse/errors.hpp"

namespace facefuse {

std::string to_string(BoundaryMode mode) {
    return mode == BoundaryMode::symmetric ? "symmetric" : "periodic";
}

BoundaryMode boundary_mode_from_string(const std::string& name) {
    if (name == "symmetric" || name == "sym") return BoundaryMode::symmetric;
    if (name == "periodic" || name == "per") return BoundaryMode::periodic;
    throw std::invalid_argument("unknown boundary mode '" + name + "'");
}

FilterBank make_filter_bank(const std::string& name) {
    if (name != "db2") {
        throw std::invalid_argument("unknown wavelet '" + name + "' (only db2 is provided)");
    }
    const double s3 = std::sqrt(3.0);
    const double norm = 1.0 / (4.0 * std::sqrt(2.0));
    FilterBank bank;
    bank.name = name;
    bank.lo_d = {(1.0 - s3) * norm, (3.0 - s3) * norm, (3.0 + s3) * norm, (1.0 + s3) * norm};
    const std::size_t len = bank.lo_d.size();
    bank.hi_d.resize(len);
    for (std::size_t k = 0; k < len; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        bank.hi_d[k] = sign * bank.lo_d[len - 1 - k];
    }
    bank.lo_r.assign(bank.lo_d.rbegin(), bank.lo_d.rend());
    bank.hi_r.assign(bank.hi_d.rbegin(), bank.hi_d.rend());
    return bank;
}

std::vector<double> extend_signal(std::span<const double> signal, BoundaryMode mode,
                                  std::size_t pad) {
    const std::size_t n = signal.size();
    if (n == 0) throw std::invalid_argument("extend_signal: empty signal");
    std::vector<double> out;
    out.reserve(n + 2 * pad);
    if (mode == BoundaryMode::symmetric) {
        if (pad > n) {
            std::ostringstream msg;
            msg << "extend_signal: symmetric pad " << pad << " exceeds signal length " << n;
            throw std::invalid_argument(msg.str());
        }
        // half-point reflection: ... x1 x0 | x0 x1 ... x_{n-1} | x_{n-1} ...
        for (std::size_t i = 0; i < pad; ++i) out.push_back(signal[pad - 1 - i]);
        out.insert(out.end(), signal.begin(), signal.end());
        for (std::size_t i = 0; i < pad; ++i) out.push_back(signal[n - 1 - i]);
    } else {
        for (std::size_t i = 0; i < n + 2 * pad; ++i) {
            // cyclic wrap, safe for pad > n
            const std::size_t idx = (i + n * (1 + pad / n) - pad) % n;
            out.push_back(signal[idx]);
        }
    }
    return out;
}

std::size_t subband_length(std::size_t n, std::size_t filter_len, BoundaryMode mode) {
    if (mode == BoundaryMode::periodic) return (n + 1) / 2;
    return (n + filter_len - 1) / 2;
}

namespace {

// Convolution samples kept by analysis: indices phase + 2t of the full
// convolution of the padded signal, phase = first even index >= L-1.
std::size_t analysis_phase(std::size_t filter_len) {
    const std::size_t start = filter_len - 1;
    return start % 2 == 0 ? start : start + 1;
}

void analyze_into(std::span<const double> extended, const std::vector<double>& filter,
                  std::size_t m, double* out) {
    const std::size_t len = filter.size();
    const std::size_t phase = analysis_phase(len);
    for (std::size_t t = 0; t < m; ++t) {
        const std::size_t i = phase + 2 * t;
        double acc = 0.0;
        for (std::size_t k = 0; k < len; ++k) {
            acc += filter[k] * extended[i - k];
        }
        out[t] = acc;
    }
}

}  // namespace

AnalysisPair analyze_1d(std::span<const double> signal, const FilterBank& bank,
                        BoundaryMode mode) {
    const std::size_t n = signal.size();
    if (n < 2) throw std::invalid_argument("analyze_1d: signal length must be >= 2");
    const std::size_t len = bank.length();

    std::vector<double> padded_source;
    std::span<const double> src = signal;
    if (mode == BoundaryMode::periodic && n % 2 != 0) {
        // periodization repeats the last sample to reach even length
        padded_source.assign(signal.begin(), signal.end());
        padded_source.push_back(signal[n - 1]);
        src = padded_source;
    }
    const std::size_t m = subband_length(n, len, mode);
    const std::vector<double> extended = extend_signal(src, mode, len - 1);

    AnalysisPair out;
    out.approx.resize(m);
    out.detail.resize(m);
    analyze_into(extended, bank.lo_d, m, out.approx.data());
    analyze_into(extended, bank.hi_d, m, out.detail.data());
    return out;
}

std::vector<double> synthesize_1d(std::span<const double> approx,
                                  std::span<const double> detail, const FilterBank& bank,
                                  BoundaryMode mode, std::size_t target_len) {
    const std::size_t m = approx.size();
    if (m != detail.size()) {
        std::ostringstream msg;
        msg << "synthesize_1d: approx length " << m << " != detail length " << detail.size();
        throw DimensionError(msg.str());
    }
    if (m == 0) throw DimensionError("synthesize_1d: empty subbands");
    const std::size_t len = bank.length();
    if (subband_length(target_len, len, mode) != m) {
        std::ostringstream msg;
        msg << "synthesize_1d: target length " << target_len << " is inconsistent with "
            << m << " coefficients";
        throw DimensionError(msg.str());
    }

    // full convolution of the zero-upsampled subbands with the
    // reconstruction filters, summed over both channels
    const std::size_t up_len = 2 * m - 1;
    const std::size_t conv_len = up_len + len - 1;
    std::vector<double> conv(conv_len, 0.0);
    for (std::size_t t = 0; t < m; ++t) {
        const double a = approx[t];
        const double d = detail[t];
        for (std::size_t k = 0; k < len; ++k) {
            conv[2 * t + k] += a * bank.lo_r[k] + d * bank.hi_r[k];
        }
    }

    const std::size_t offset = len - 2;
    std::vector<double> out(target_len, 0.0);
    if (mode == BoundaryMode::symmetric) {
        for (std::size_t j = 0; j < target_len; ++j) out[j] = conv[j + offset];
    } else {
        // fold the linear convolution onto the even periodized grid
        const std::size_t n_even = target_len + (target_len % 2);
        std::vector<double> folded(n_even, 0.0);
        for (std::size_t i = 0; i < conv_len; ++i) {
            const std::size_t j = (i + n_even * (1 + offset / n_even) - offset) % n_even;
            folded[j] += conv[i];
        }
        for (std::size_t j = 0; j < target_len; ++j) out[j] = folded[j];
    }
    return out;
}

namespace {

// Filters every row (along the column index); returns lo/hi matrices of
// width subband_length(cols).
void analyze_rows(const Matrix& x, const FilterBank& bank, BoundaryMode mode, Matrix& lo,
                  Matrix& hi) {
    const std::size_t m = subband_length(x.cols, bank.length(), mode);
    lo = Matrix(x.rows, m);
    hi = Matrix(x.rows, m);
    std::vector<double> row(x.cols);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < x.cols; ++c) row[c] = x(r, c);
        AnalysisPair pair = analyze_1d(row, bank, mode);
        for (std::size_t c = 0; c < m; ++c) {
            lo(r, c) = pair.approx[c];
            hi(r, c) = pair.detail[c];
        }
    }
}

// Filters every column (along the row index).
void analyze_cols(const Matrix& x, const FilterBank& bank, BoundaryMode mode, Matrix& lo,
                  Matrix& hi) {
    const std::size_t m = subband_length(x.rows, bank.length(), mode);
    lo = Matrix(m, x.cols);
    hi = Matrix(m, x.cols);
    std::vector<double> col(x.rows);
    for (std::size_t c = 0; c < x.cols; ++c) {
        for (std::size_t r = 0; r < x.rows; ++r) col[r] = x(r, c);
        AnalysisPair pair = analyze_1d(col, bank, mode);
        for (std::size_t r = 0; r < m; ++r) {
            lo(r, c) = pair.approx[r];
            hi(r, c) = pair.detail[r];
        }
    }
}

Matrix synthesize_cols(const Matrix& lo, const Matrix& hi, const FilterBank& bank,
                       BoundaryMode mode, std::size_t target_rows) {
    Matrix out(target_rows, lo.cols);
    std::vector<double> a(lo.rows), d(hi.rows);
    for (std::size_t c = 0; c < lo.cols; ++c) {
        for (std::size_t r = 0; r < lo.rows; ++r) {
            a[r] = lo(r, c);
            d[r] = hi(r, c);
        }
        std::vector<double> col = synthesize_1d(a, d, bank, mode, target_rows);
        for (std::size_t r = 0; r < target_rows; ++r) out(r, c) = col[r];
    }
    return out;
}

Matrix synthesize_rows(const Matrix& lo, const Matrix& hi, const FilterBank& bank,
                       BoundaryMode mode, std::size_t target_cols) {
    Matrix out(lo.rows, target_cols);
    std::vector<double> a(lo.cols), d(hi.cols);
    for (std::size_t r = 0; r < lo.rows; ++r) {
        for (std::size_t c = 0; c < lo.cols; ++c) {
            a[c] = lo(r, c);
            d[c] = hi(r, c);
        }
        std::vector<double> row = synthesize_1d(a, d, bank, mode, target_cols);
        for (std::size_t c = 0; c < target_cols; ++c) out(r, c) = row[c];
    }
    return out;
}

}  // namespace

SubbandQuad dwt2_step(const Matrix& x, const FilterBank& bank, BoundaryMode mode) {
    if (x.rows < 2 || x.cols < 2) {
        std::ostringstream msg;
        msg << "dwt2_step: input " << x.rows << "x" << x.cols << " is degenerate (need >= 2x2)";
        throw std::invalid_argument(msg.str());
    }
    Matrix row_lo, row_hi;
    analyze_rows(x, bank, mode, row_lo, row_hi);

    SubbandQuad quad;
    Matrix lo, hi;
    analyze_cols(row_lo, bank, mode, lo, hi);
    quad.ca = std::move(lo);
    quad.ch = std::move(hi);
    analyze_cols(row_hi, bank, mode, lo, hi);
    quad.cv = std::move(lo);
    quad.cd = std::move(hi);
    return quad;
}

Matrix idwt2_step(const SubbandQuad& quad, const FilterBank& bank, BoundaryMode mode,
                  Dims target_dims) {
    if (!quad.ca.same_dims(quad.ch) || !quad.ca.same_dims(quad.cv) ||
        !quad.ca.same_dims(quad.cd)) {
        throw DimensionError("idwt2_step: subbands differ in dimensions");
    }
    const std::size_t len = bank.length();
    if (subband_length(target_dims.rows, len, mode) != quad.ca.rows ||
        subband_length(target_dims.cols, len, mode) != quad.ca.cols) {
        std::ostringstream msg;
        msg << "idwt2_step: target " << target_dims.rows << "x" << target_dims.cols
            << " is inconsistent with subbands " << quad.ca.rows << "x" << quad.ca.cols;
        throw DimensionError(msg.str());
    }
    const Matrix row_lo = synthesize_cols(quad.ca, quad.ch, bank, mode, target_dims.rows);
    const Matrix row_hi = synthesize_cols(quad.cv, quad.cd, bank, mode, target_dims.rows);
    return synthesize_rows(row_lo, row_hi, bank, mode, target_dims.cols);
}

namespace {

// Smallest per-axis input a single analysis step accepts.
std::size_t min_axis_length(const FilterBank& bank, BoundaryMode mode) {
    if (mode == BoundaryMode::symmetric) {
        return std::max<std::size_t>(2, bank.length() - 1);
    }
    return 2;
}

}  // namespace

DecompositionPyramid decompose(const Matrix& image, const FilterBank& bank,
                               BoundaryMode mode, int levels) {
    if (levels < 1) throw std::invalid_argument("decompose: levels must be >= 1");

    // capacity check up front so failure names the offending level
    const std::size_t min_len = min_axis_length(bank, mode);
    Dims dims = dims_of(image);
    for (int j = 1; j <= levels; ++j) {
        if (dims.rows < min_len || dims.cols < min_len) {
            std::ostringstream msg;
            msg << "decompose: level " << j << " input is " << dims.rows << "x" << dims.cols
                << ", below the minimum " << min_len << " per axis for " << to_string(mode)
                << " mode";
            throw LevelCapacityError(j, msg.str());
        }
        dims.rows = subband_length(dims.rows, bank.length(), mode);
        dims.cols = subband_length(dims.cols, bank.length(), mode);
    }

    DecompositionPyramid pyr;
    pyr.wavelet_name = bank.name;
    pyr.mode = mode;
    pyr.levels = levels;
    pyr.details.reserve(static_cast<std::size_t>(levels));
    pyr.input_dims.reserve(static_cast<std::size_t>(levels));

    Matrix current = image;
    for (int j = 1; j <= levels; ++j) {
        pyr.input_dims.push_back(dims_of(current));
        SubbandQuad quad = dwt2_step(current, bank, mode);
        pyr.details.push_back({std::move(quad.ch), std::move(quad.cv), std::move(quad.cd)});
        current = std::move(quad.ca);
    }
    pyr.approximation = std::move(current);
    return pyr;
}

Matrix reconstruct(const DecompositionPyramid& pyramid, const FilterBank& bank) {
    const int levels = pyramid.levels;
    if (levels < 1 || pyramid.details.size() != static_cast<std::size_t>(levels) ||
        pyramid.input_dims.size() != static_cast<std::size_t>(levels)) {
        throw DataError("reconstruct: pyramid level bookkeeping is inconsistent");
    }
    // validate the dims chain before doing any work
    const std::size_t len = bank.length();
    Dims expect = pyramid.input_dims.front();
    for (int j = 1; j <= levels; ++j) {
        const Dims in = pyramid.input_dims[static_cast<std::size_t>(j - 1)];
        if (in != expect) {
            std::ostringstream msg;
            msg << "reconstruct: dims chain broken at level " << j;
            throw DataError(msg.str());
        }
        const Dims sub{subband_length(in.rows, len, pyramid.mode),
                       subband_length(in.cols, len, pyramid.mode)};
        const DetailTriple& det = pyramid.details[static_cast<std::size_t>(j - 1)];
        if (dims_of(det.ch) != sub || dims_of(det.cv) != sub || dims_of(det.cd) != sub) {
            std::ostringstream msg;
            msg << "reconstruct: level " << j << " detail dims do not match the recorded chain";
            throw DataError(msg.str());
        }
        expect = sub;
    }
    if (dims_of(pyramid.approximation) != expect) {
        throw DataError("reconstruct: approximation dims do not match the level-"
                        + std::to_string(levels) + " chain");
    }

    Matrix current = pyramid.approximation;
    for (int j = levels; j >= 1; --j) {
        const DetailTriple& det = pyramid.details[static_cast<std::size_t>(j - 1)];
        SubbandQuad quad{current, det.ch, det.cv, det.cd};
        current = idwt2_step(quad, bank, pyramid.mode,
                             pyramid.input_dims[static_cast<std::size_t>(j - 1)]);
    }
    return current;
}

DecompositionPyramid zero_approximation(DecompositionPyramid pyramid) {
    std::fill(pyramid.approximation.values.begin(), pyramid.approximation.values.end(), 0.0);
    return pyramid;
}

}  // namespace facefuse
