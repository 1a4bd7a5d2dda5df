#include "spikecert/determinant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spikecert {

namespace {

using detail::AtomTable;
using detail::build_atom_table;

// A row of a bordered determinant: d1^deriv evaluations anchored at `point`,
// with `border` in the leading column (overridden by the s0-augmented
// variants).
struct RowSpec {
    double point = 0.0;
    int deriv = 0;
    double border = 0.0;
};

double span_hint(const Framework& fw, const std::vector<double>& anchors, const DeterminantOptions& opts) {
    if (opts.span > 0.0) return opts.span;
    double lo = anchors.front(), hi = anchors.back();
    for (double x : anchors) { lo = std::min(lo, x); hi = std::max(hi, x); }
    if (fw.measure().is_discrete()) {
        auto [slo, shi] = fw.measure().location_span();
        lo = std::min(lo, slo);
        hi = std::max(hi, shi);
    }
    return std::max(1.0, hi - lo);
}

double switch_radius(double span, int vanish_order, const DeterminantOptions& opts) {
    double rel = std::max(opts.delta_switch_rel, std::pow(1e-18, 1.0 / double(vanish_order)));
    return span * rel;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= double(i);
    return f;
}

// Columns of the V family: border, then (C(.,x_j), d2 C(.,x_j)) per anchor.
// Columns of the W family: border, then d2^l C(.,x0), l = 0..2M-1.
struct ColumnFamily {
    bool confluent = false;        // W-type
    std::vector<double> anchors;   // x_j, or {x0}
    int order = 1;                 // max second-argument derivative
    int count() const { return confluent ? order + 1 : 2 * int(anchors.size()); }
};

template <class R>
SmallMat<R> assemble_border(const Framework& fw, const ColumnFamily& cols, const std::vector<RowSpec>& rows) {
    const int nc = cols.count() + 1;
    SmallMat<R> mat(int(rows.size()), nc);
    const bool discrete = fw.measure().is_discrete();
    std::vector<AtomTable<R>> col_tables;
    if (discrete) {
        if (cols.confluent) {
            col_tables.push_back(build_atom_table<R>(fw.kernel(), fw.measure(), R(cols.anchors[0]), cols.order));
        } else {
            for (double x : cols.anchors) col_tables.push_back(build_atom_table<R>(fw.kernel(), fw.measure(), R(x), 1));
        }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const RowSpec& row = rows[r];
        mat(int(r), 0) = R(row.border);
        if (discrete) {
            auto rt = build_atom_table<R>(fw.kernel(), fw.measure(), R(row.point), row.deriv);
            if (cols.confluent) {
                for (int l = 0; l <= cols.order; ++l)
                    mat(int(r), 1 + l) = fw.correlation_tables<R>(row.deriv, l, rt, col_tables[0]);
            } else {
                for (std::size_t j = 0; j < cols.anchors.size(); ++j) {
                    mat(int(r), 1 + 2 * int(j)) = fw.correlation_tables<R>(row.deriv, 0, rt, col_tables[j]);
                    mat(int(r), 2 + 2 * int(j)) = fw.correlation_tables<R>(row.deriv, 1, rt, col_tables[j]);
                }
            }
        } else {
            if (cols.confluent) {
                for (int l = 0; l <= cols.order; ++l)
                    mat(int(r), 1 + l) = fw.correlation_t<R>(row.deriv, l, R(row.point), R(cols.anchors[0]));
            } else {
                for (std::size_t j = 0; j < cols.anchors.size(); ++j) {
                    mat(int(r), 1 + 2 * int(j)) = fw.correlation_t<R>(row.deriv, 0, R(row.point), R(cols.anchors[j]));
                    mat(int(r), 2 + 2 * int(j)) = fw.correlation_t<R>(row.deriv, 1, R(row.point), R(cols.anchors[j]));
                }
            }
        }
    }
    return mat;
}

double hadamard_bound(const SmallMat<double>& m) {
    double h = 1.0;
    for (int i = 0; i < m.rows; ++i) {
        double acc = 0.0;
        for (int j = 0; j < m.cols; ++j) acc += m(i, j) * m(i, j);
        h *= std::sqrt(acc);
    }
    return h;
}

double adaptive_border_det(const Framework& fw, const ColumnFamily& cols, const std::vector<RowSpec>& rows,
                           const DeterminantOptions& opts) {
    if (!opts.force_extended) {
        SmallMat<double> m = assemble_border<double>(fw, cols, rows);
        double bound = hadamard_bound(m);
        PivotInfo<double> info;
        double d = det_full_pivot<double>(std::move(m), &info);
        double floor = 1e-13 * bound * std::max(1.0, info.growth);
        if (info.growth <= opts.growth_threshold && std::fabs(d) > floor) return d;
    }
    return to_double(det_full_pivot<DD>(assemble_border<DD>(fw, cols, rows)));
}

std::vector<RowSpec> anchor_rows_V(const std::vector<double>& xs, const std::vector<double>& borders) {
    std::vector<RowSpec> rows;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        rows.push_back({xs[i], 0, borders[i]});
        rows.push_back({xs[i], 1, 0.0});
    }
    return rows;
}

int nearest_anchor(const std::vector<double>& xs, double t, const std::vector<bool>* mask = nullptr) {
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (mask && !(*mask)[i]) continue;
        double d = std::fabs(t - xs[i]);
        if (d < bd) { bd = d; best = int(i); }
    }
    return best;
}

// Shared evaluation of the V-type rescaled determinant with arbitrary anchor
// borders (plain: all +1; signed: sign(a_i)) and rescaling restricted to the
// anchors carried by `rescale_mask`.
double rescaled_det_V(const Framework& fw, const std::vector<double>& xs, const std::vector<double>& borders,
                      double t_border, const std::vector<bool>& rescale_mask, double t,
                      const DeterminantOptions& opts) {
    ColumnFamily cols{false, xs, 1};
    double span = span_hint(fw, xs, opts);
    double delta = switch_radius(span, 2, opts);
    int near = nearest_anchor(xs, t, &rescale_mask);
    if (near >= 0 && std::fabs(t - xs[std::size_t(near)]) < delta) {
        std::vector<RowSpec> rows{{xs[std::size_t(near)], 2, 0.0}};
        auto anchor = anchor_rows_V(xs, borders);
        rows.insert(rows.end(), anchor.begin(), anchor.end());
        double dext = adaptive_border_det(fw, cols, rows, opts);
        double den = 1.0;
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (int(j) != near && rescale_mask[j]) den *= (xs[std::size_t(near)] - xs[j]) * (xs[std::size_t(near)] - xs[j]);
        return dext / den;
    }
    std::vector<RowSpec> rows{{t, 0, t_border}};
    auto anchor = anchor_rows_V(xs, borders);
    rows.insert(rows.end(), anchor.begin(), anchor.end());
    double draw = adaptive_border_det(fw, cols, rows, opts);
    double den = 1.0;
    for (std::size_t j = 0; j < xs.size(); ++j)
        if (rescale_mask[j]) den *= (t - xs[j]) * (t - xs[j]);
    return 2.0 * draw / den;
}

void check_positions(const std::vector<double>& xs) {
    if (xs.empty()) throw Error("determinant criteria need at least one anchor");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        if (!(xs[i] < xs[i + 1])) throw DomainViolation("positions must be strictly increasing");
}

} // namespace

double det_V(const Framework& fw, const std::vector<double>& positions, double t, const DeterminantOptions& opts) {
    check_positions(positions);
    std::vector<double> borders(positions.size(), 1.0);
    std::vector<bool> mask(positions.size(), true);
    return rescaled_det_V(fw, positions, borders, 1.0, mask, t, opts);
}

double det_W(const Framework& fw, double x0, int M, double t, const DeterminantOptions& opts) {
    if (M < 1) throw Error("det_W needs M >= 1");
    if (fw.kernel().max_deriv_order < 2 * M) throw DerivOrderUnsupported("det_W requires kernel regularity 2M");
    ColumnFamily cols{true, {x0}, 2 * M - 1};
    double span = span_hint(fw, {x0}, opts);
    double delta = switch_radius(span, 2 * M, opts);
    std::vector<RowSpec> rows;
    if (std::fabs(t - x0) < delta) {
        rows.push_back({x0, 2 * M, 0.0});
        for (int r = 0; r < 2 * M; ++r) rows.push_back({x0, r, r == 0 ? 1.0 : 0.0});
        return adaptive_border_det(fw, cols, rows, opts);
    }
    rows.push_back({t, 0, 1.0});
    for (int r = 0; r < 2 * M; ++r) rows.push_back({x0, r, r == 0 ? 1.0 : 0.0});
    double draw = adaptive_border_det(fw, cols, rows, opts);
    return factorial(2 * M) * draw / powi(t - x0, 2 * M);
}

std::pair<double, double> det_V_signed(const Framework& fw, const SpikeConfiguration& spikes, double t,
                                       const DeterminantOptions& opts) {
    spikes.validate(false);
    const auto& xs = spikes.positions;
    std::vector<double> borders(xs.size());
    std::vector<bool> plus_mask(xs.size()), minus_mask(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (spikes.amplitudes[i] == 0.0) throw DomainViolation("signed determinants require nonzero amplitudes");
        borders[i] = spikes.amplitudes[i] > 0.0 ? 1.0 : -1.0;
        plus_mask[i] = borders[i] > 0.0;
        minus_mask[i] = !plus_mask[i];
    }
    double dplus = rescaled_det_V(fw, xs, borders, 1.0, plus_mask, t, opts);
    double dminus = rescaled_det_V(fw, xs, borders, -1.0, minus_mask, t, opts);
    return {dplus, dminus};
}

double det_gram_gamma(const Framework& fw, const std::vector<double>& positions) {
    check_positions(positions);
    std::vector<DD> pos(positions.begin(), positions.end());
    return to_double(det_full_pivot<DD>(fw.gram_gamma_t<DD>(pos)));
}

double det_gram_F(const Framework& fw, double x0, int k) {
    return to_double(det_full_pivot<DD>(fw.gram_F_t<DD>(DD(x0), k)));
}

namespace {

// Bordered Gram of the Cramer identity: Gram rows, one extra
// second-derivative row at anchor i, border column (1,0,...,1,0,0)^T
// (e_0 for the confluent variant), all in double-double.
DD cramer_lhs_V(const Framework& fw, const std::vector<double>& xs, int anchor_index) {
    const int m = int(xs.size());
    const int n = 2 * m + 1;
    SmallMat<DD> mat(n, n);
    const bool discrete = fw.measure().is_discrete();
    std::vector<AtomTable<DD>> rowtabs, coltabs;
    if (discrete)
        for (double x : xs) {
            rowtabs.push_back(build_atom_table<DD>(fw.kernel(), fw.measure(), DD(x), 2));
            coltabs.push_back(build_atom_table<DD>(fw.kernel(), fw.measure(), DD(x), 1));
        }
    auto corr = [&](int r, int l, int krow, int jcol) -> DD {
        if (discrete) return fw.correlation_tables<DD>(r, l, rowtabs[std::size_t(krow)], coltabs[std::size_t(jcol)]);
        return fw.correlation_t<DD>(r, l, DD(xs[std::size_t(krow)]), DD(xs[std::size_t(jcol)]));
    };
    for (int k = 0; k < m; ++k) {
        for (int a = 0; a <= 1; ++a) {
            int row = 2 * k + a;
            for (int j = 0; j < m; ++j)
                for (int b = 0; b <= 1; ++b) mat(row, 2 * j + b) = corr(a, b, k, j);
            mat(row, n - 1) = DD(a == 0 ? 1.0 : 0.0);
        }
    }
    for (int j = 0; j < m; ++j)
        for (int b = 0; b <= 1; ++b) mat(2 * m, 2 * j + b) = corr(2, b, anchor_index, j);
    mat(2 * m, n - 1) = DD(0.0);
    return det_full_pivot<DD>(std::move(mat));
}

DD cramer_lhs_W(const Framework& fw, double x0, int M) {
    const int n = 2 * M + 1;
    SmallMat<DD> mat(n, n);
    const bool discrete = fw.measure().is_discrete();
    AtomTable<DD> table;
    if (discrete) table = build_atom_table<DD>(fw.kernel(), fw.measure(), DD(x0), 2 * M);
    for (int r = 0; r <= 2 * M; ++r) {
        for (int l = 0; l < 2 * M; ++l)
            mat(r, l) = discrete ? fw.correlation_tables<DD>(r, l, table, table)
                                 : fw.correlation_t<DD>(r, l, DD(x0), DD(x0));
        mat(r, n - 1) = DD(r == 0 ? 1.0 : 0.0);
    }
    return det_full_pivot<DD>(std::move(mat));
}

double relative_residual(DD lhs, DD rhs) {
    double denom = std::max({std::fabs(to_double(lhs)), std::fabs(to_double(rhs)), std::numeric_limits<double>::min()});
    return std::fabs(to_double(lhs - rhs)) / denom;
}

} // namespace

double cramer_residual(const Framework& fw, const std::vector<double>& positions, int anchor_index,
                       const SolveOptions& solve_opts) {
    check_positions(positions);
    if (anchor_index < 0 || anchor_index >= int(positions.size())) throw Error("anchor index out of range");
    auto spikes = SpikeConfiguration::make(positions, std::vector<double>(positions.size(), 1.0));
    SolveOptions so = solve_opts;
    so.force_extended = true; // the residual compares both routes at full precision
    Certificate cert = compute_eta_V(fw, spikes, so);
    DD eta_dd;
    if (cert.extended_precision) {
        CertificateEvaluator<DD> eval(cert);
        eta_dd = eval(2, DD(positions[std::size_t(anchor_index)]));
    } else {
        CertificateEvaluator<double> eval(cert);
        eta_dd = DD(eval(2, positions[std::size_t(anchor_index)]));
    }
    std::vector<DD> pos(positions.begin(), positions.end());
    DD detg = det_full_pivot<DD>(fw.gram_gamma_t<DD>(pos));
    DD lhs = cramer_lhs_V(fw, positions, anchor_index);
    DD rhs = -eta_dd * detg;
    return relative_residual(lhs, rhs);
}

double cramer_residual_W(const Framework& fw, double x0, int M, const SolveOptions& solve_opts) {
    SolveOptions so = solve_opts;
    so.force_extended = true;
    Certificate cert = compute_eta_W(fw, x0, M, so);
    DD eta_dd;
    if (cert.extended_precision) {
        CertificateEvaluator<DD> eval(cert);
        eta_dd = eval(2 * M, DD(x0));
    } else {
        CertificateEvaluator<double> eval(cert);
        eta_dd = DD(eval(2 * M, x0));
    }
    DD detf = det_full_pivot<DD>(fw.gram_F_t<DD>(DD(x0), 2 * M - 1));
    DD lhs = cramer_lhs_W(fw, x0, M);
    DD rhs = -eta_dd * detf;
    return relative_residual(lhs, rhs);
}

namespace {

// Sample-indexed determinant assembly. Column specs mirror the border
// families; rows are kernel evaluations at the chosen sample subset.
struct SampleCols {
    bool confluent = false;
    std::vector<double> anchors;
    int order = 1;
    bool ones_column = false; // normalized variants
};

template <class R>
SmallMat<R> assemble_sample_det(const Kernel& kernel, const SampleCols& cols, const std::vector<double>& samples) {
    const int base = cols.confluent ? cols.order + 1 : 2 * int(cols.anchors.size());
    const int n = base + (cols.ones_column ? 1 : 0);
    if (int(samples.size()) != n) throw Error("sample count does not match determinant size");
    SmallMat<R> mat(n, n);
    for (int r = 0; r < n; ++r) {
        R s(samples[std::size_t(r)]);
        int c = 0;
        if (cols.ones_column) mat(r, c++) = R(1.0);
        if (cols.confluent) {
            for (int j = 0; j <= cols.order; ++j) mat(r, c++) = kernel_deriv<R>(kernel, j, R(cols.anchors[0]), s);
        } else {
            for (double x : cols.anchors) {
                mat(r, c++) = kernel_deriv<R>(kernel, 0, R(x), s);
                mat(r, c++) = kernel_deriv<R>(kernel, 1, R(x), s);
            }
        }
    }
    return mat;
}

// Rows of the sample-bordered determinant det_B, shared between V and W.
template <class R>
SmallMat<R> assemble_B(const Kernel& kernel, const std::vector<RowSpec>& rows, const std::vector<double>& samples,
                       std::optional<double> s0) {
    const int n = int(samples.size()) + 1;
    if (int(rows.size()) != n) throw Error("det_B row count mismatch");
    SmallMat<R> mat(n, n);
    for (int r = 0; r < n; ++r) {
        const RowSpec& row = rows[std::size_t(r)];
        mat(r, 0) = s0 ? kernel_deriv<R>(kernel, row.deriv, R(row.point), R(*s0)) : R(row.border);
        for (int j = 1; j < n; ++j)
            mat(r, j) = kernel_deriv<R>(kernel, row.deriv, R(row.point), R(samples[std::size_t(j - 1)]));
    }
    return mat;
}

std::vector<RowSpec> b_rows_V(const std::vector<double>& xs, double t, int t_deriv) {
    std::vector<RowSpec> rows{{t, t_deriv, t_deriv == 0 ? 1.0 : 0.0}};
    for (double x : xs) {
        rows.push_back({x, 0, 1.0});
        rows.push_back({x, 1, 0.0});
    }
    return rows;
}

std::vector<RowSpec> b_rows_W(double x0, int M, double t, int t_deriv) {
    std::vector<RowSpec> rows{{t, t_deriv, t_deriv == 0 ? 1.0 : 0.0}};
    for (int r = 0; r < 2 * M; ++r) rows.push_back({x0, r, r == 0 ? 1.0 : 0.0});
    return rows;
}

} // namespace

double det_A(const Kernel& kernel, const std::vector<double>& positions, const std::vector<double>& samples) {
    SampleCols cols{false, positions, 1, false};
    return to_double(det_full_pivot<DD>(assemble_sample_det<DD>(kernel, cols, samples)));
}

double det_A(const Kernel& kernel, double x0, int M, const std::vector<double>& samples) {
    SampleCols cols{true, {x0}, 2 * M - 1, false};
    return to_double(det_full_pivot<DD>(assemble_sample_det<DD>(kernel, cols, samples)));
}

double det_A_normalized(const Kernel& kernel, const std::vector<double>& positions,
                        const std::vector<double>& samples) {
    SampleCols cols{false, positions, 1, true};
    return to_double(det_full_pivot<DD>(assemble_sample_det<DD>(kernel, cols, samples)));
}

double det_A_normalized(const Kernel& kernel, double x0, int M, const std::vector<double>& samples) {
    SampleCols cols{true, {x0}, 2 * M - 1, true};
    return to_double(det_full_pivot<DD>(assemble_sample_det<DD>(kernel, cols, samples)));
}

double det_B(const Kernel& kernel, const std::vector<double>& positions, double t,
             const std::vector<double>& samples, std::optional<double> s0_augment, const DeterminantOptions& opts) {
    check_positions(positions);
    if (s0_augment && !samples.empty() && !(*s0_augment < samples.front()))
        throw DomainViolation("s0 augment must lie strictly below the samples");
    double span = std::max(1.0, positions.back() - positions.front() + 1.0);
    if (opts.span > 0.0) span = opts.span;
    double delta = switch_radius(span, 2, opts);
    int near = nearest_anchor(positions, t);
    if (near >= 0 && std::fabs(t - positions[std::size_t(near)]) < delta) {
        auto rows = b_rows_V(positions, positions[std::size_t(near)], 2);
        double d = to_double(det_full_pivot<DD>(assemble_B<DD>(kernel, rows, samples, s0_augment)));
        double den = 2.0;
        for (std::size_t j = 0; j < positions.size(); ++j)
            if (int(j) != near) den *= (positions[std::size_t(near)] - positions[j]) * (positions[std::size_t(near)] - positions[j]);
        return d / den;
    }
    auto rows = b_rows_V(positions, t, 0);
    double d = to_double(det_full_pivot<DD>(assemble_B<DD>(kernel, rows, samples, s0_augment)));
    double den = 1.0;
    for (double x : positions) den *= (t - x) * (t - x);
    return d / den;
}

double det_B(const Kernel& kernel, double x0, int M, double t, const std::vector<double>& samples,
             std::optional<double> s0_augment, const DeterminantOptions& opts) {
    if (s0_augment && !samples.empty() && !(*s0_augment < samples.front()))
        throw DomainViolation("s0 augment must lie strictly below the samples");
    double span = opts.span > 0.0 ? opts.span : 1.0;
    double delta = switch_radius(span, 2 * M, opts);
    if (std::fabs(t - x0) < delta) {
        auto rows = b_rows_W(x0, M, x0, 2 * M);
        double d = to_double(det_full_pivot<DD>(assemble_B<DD>(kernel, rows, samples, s0_augment)));
        return d / factorial(2 * M);
    }
    auto rows = b_rows_W(x0, M, t, 0);
    double d = to_double(det_full_pivot<DD>(assemble_B<DD>(kernel, rows, samples, s0_augment)));
    return d / powi(t - x0, 2 * M);
}

namespace {

std::size_t binomial_count(int n, int k) {
    if (k < 0 || k > n) return 0;
    long double acc = 1.0L;
    for (int i = 1; i <= k; ++i) acc = acc * (long double)(n - k + i) / (long double)i;
    return std::size_t(acc + 0.5L);
}

struct TupleContext {
    std::vector<double> sample_locs;
    std::vector<double> sample_weights;
};

TupleContext tuple_context(const Framework& fw, int needed, const DeterminantOptions& opts) {
    if (!fw.measure().is_discrete()) throw UnsupportedClosedForm("tuple validation needs a discrete measure");
    const auto& atoms = fw.measure().atoms;
    const int K = int(atoms.size());
    if (K < needed) throw RankDeficient("fewer sample atoms than the tuple size");
    if (K > 24) throw TooManySamples("tuple enumeration guarded at 24 sample atoms");
    std::size_t count = binomial_count(K, needed);
    if (count > opts.tuple_budget) throw TooManySamples("tuple enumeration exceeds the configured budget");
    TupleContext ctx;
    for (const auto& a : atoms) {
        ctx.sample_locs.push_back(a.location);
        ctx.sample_weights.push_back(a.weight);
    }
    return ctx;
}

// Enumerates increasing index tuples in lexicographic order.
template <class Fn>
void for_each_tuple(int K, int r, Fn&& fn) {
    std::vector<int> idx(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) idx[std::size_t(i)] = i;
    while (true) {
        fn(idx);
        int i = r - 1;
        while (i >= 0 && idx[std::size_t(i)] == K - r + i) --i;
        if (i < 0) break;
        ++idx[std::size_t(i)];
        for (int j = i + 1; j < r; ++j) idx[std::size_t(j)] = idx[std::size_t(j - 1)] + 1;
    }
}

CauchyBinetResult cauchy_binet_impl(const Framework& fw, const SampleCols& acols,
                                    const std::vector<RowSpec>& brows_plain, bool b_extension, double ext_den,
                                    double d_direct, double gram_direct, double prefactor,
                                    std::optional<double> t, const DeterminantOptions& opts) {
    const int r = acols.confluent ? acols.order + 1 : 2 * int(acols.anchors.size());
    TupleContext ctx = tuple_context(fw, r, opts);
    const int K = int(ctx.sample_locs.size());
    std::vector<DD> gram_terms, d_terms;
    std::vector<double> subset(static_cast<std::size_t>(r));
    for_each_tuple(K, r, [&](const std::vector<int>& idx) {
        DD w(1.0);
        for (int i = 0; i < r; ++i) {
            subset[std::size_t(i)] = ctx.sample_locs[std::size_t(idx[std::size_t(i)])];
            w *= DD(ctx.sample_weights[std::size_t(idx[std::size_t(i)])]);
        }
        DD da = det_full_pivot<DD>(assemble_sample_det<DD>(fw.kernel(), acols, subset));
        gram_terms.push_back(w * da * da);
        if (t) {
            DD db = det_full_pivot<DD>(assemble_B<DD>(fw.kernel(), brows_plain, subset, std::nullopt));
            d_terms.push_back(w * da * db);
        }
    });
    CauchyBinetResult res;
    res.tuples = gram_terms.size();
    res.gram_direct = gram_direct;
    res.gram_tuple = to_double(pairwise_sum<DD>(gram_terms));
    res.gram_residual = relative_residual(DD(res.gram_direct), DD(res.gram_tuple));
    if (t) {
        DD sum = pairwise_sum<DD>(d_terms);
        double tuple_value = to_double(sum) * prefactor;
        if (b_extension) tuple_value = to_double(sum) / ext_den;
        res.d_direct = d_direct;
        res.d_tuple = tuple_value;
        res.d_residual = relative_residual(DD(res.d_direct), DD(res.d_tuple));
    }
    return res;
}

} // namespace

CauchyBinetResult cauchy_binet_check(const Framework& fw, const std::vector<double>& positions,
                                     std::optional<double> t, const DeterminantOptions& opts) {
    check_positions(positions);
    if (fw.normalized()) throw UnsupportedClosedForm("tuple validation applies to the unnormalized atoms");
    SampleCols acols{false, positions, 1, false};
    double gram_direct = det_gram_gamma(fw, positions);
    double d_direct = 0.0;
    std::vector<RowSpec> brows;
    bool ext = false;
    double ext_den = 1.0;
    double prefactor = 1.0;
    if (t) {
        DeterminantOptions fo = opts;
        fo.force_extended = true;
        d_direct = det_V(fw, positions, *t, fo);
        double span = span_hint(fw, positions, opts);
        double delta = switch_radius(span, 2, opts);
        int near = nearest_anchor(positions, *t);
        if (near >= 0 && std::fabs(*t - positions[std::size_t(near)]) < delta) {
            ext = true;
            brows = b_rows_V(positions, positions[std::size_t(near)], 2);
            ext_den = 1.0;
            for (std::size_t j = 0; j < positions.size(); ++j)
                if (int(j) != near)
                    ext_den *= (positions[std::size_t(near)] - positions[j]) * (positions[std::size_t(near)] - positions[j]);
        } else {
            brows = b_rows_V(positions, *t, 0);
            prefactor = 2.0;
            for (double x : positions) prefactor /= (*t - x) * (*t - x);
        }
    }
    return cauchy_binet_impl(fw, acols, brows, ext, ext_den, d_direct, gram_direct, prefactor, t, opts);
}

CauchyBinetResult cauchy_binet_check(const Framework& fw, double x0, int M, std::optional<double> t,
                                     const DeterminantOptions& opts) {
    if (fw.normalized()) throw UnsupportedClosedForm("tuple validation applies to the unnormalized atoms");
    SampleCols acols{true, {x0}, 2 * M - 1, false};
    double gram_direct = det_gram_F(fw, x0, 2 * M - 1);
    double d_direct = 0.0;
    std::vector<RowSpec> brows;
    bool ext = false;
    double ext_den = 1.0;
    double prefactor = 1.0;
    if (t) {
        DeterminantOptions fo = opts;
        fo.force_extended = true;
        d_direct = det_W(fw, x0, M, *t, fo);
        double span = span_hint(fw, {x0}, opts);
        double delta = switch_radius(span, 2 * M, opts);
        if (std::fabs(*t - x0) < delta) {
            ext = true;
            brows = b_rows_W(x0, M, x0, 2 * M);
            ext_den = 1.0; // (2M)! of the extension cancels against the D_W prefactor
        } else {
            brows = b_rows_W(x0, M, *t, 0);
            prefactor = factorial(2 * M) / powi(*t - x0, 2 * M);
        }
    }
    return cauchy_binet_impl(fw, acols, brows, ext, ext_den, d_direct, gram_direct, prefactor, t, opts);
}

double normalized_border_det(const Framework& raw_fw, const std::vector<double>& positions, double t) {
    check_positions(positions);
    Framework raw(raw_fw.kernel(), raw_fw.measure(), false);
    const int m = int(positions.size());
    const int n = 2 * m + 1;
    SmallMat<DD> mat(n, n);
    std::vector<AtomTable<DD>> rowtabs, coltabs;
    for (double x : positions) {
        rowtabs.push_back(build_atom_table<DD>(raw.kernel(), raw.measure(), DD(x), 1));
        coltabs.push_back(build_atom_table<DD>(raw.kernel(), raw.measure(), DD(x), 1));
    }
    AtomTable<DD> ttab = build_atom_table<DD>(raw.kernel(), raw.measure(), DD(t), 0);
    auto fill_row = [&](int row, const AtomTable<DD>& tab, int deriv, DD border) {
        mat(row, 0) = border;
        for (int j = 0; j < m; ++j) {
            mat(row, 1 + 2 * j) = raw.correlation_tables<DD>(deriv, 0, tab, coltabs[std::size_t(j)]);
            mat(row, 2 + 2 * j) = raw.correlation_tables<DD>(deriv, 1, tab, coltabs[std::size_t(j)]);
        }
    };
    fill_row(0, ttab, 0, raw.normalizer_t<DD>(0, DD(t)));
    for (int i = 0; i < m; ++i) {
        fill_row(1 + 2 * i, rowtabs[std::size_t(i)], 0, raw.normalizer_t<DD>(0, DD(positions[std::size_t(i)])));
        fill_row(2 + 2 * i, rowtabs[std::size_t(i)], 1, raw.normalizer_t<DD>(1, DD(positions[std::size_t(i)])));
    }
    return to_double(det_full_pivot<DD>(std::move(mat)));
}

namespace {

DeterminantReport make_report(const Framework& fw, const std::vector<double>& anchors, bool confluent, int M,
                              double lo, double hi, int grid_points, const DeterminantOptions& opts) {
    DeterminantReport rep;
    rep.kind = confluent ? DetReportKind::W : DetReportKind::V;
    rep.grid_t.reserve(static_cast<std::size_t>(grid_points));
    rep.grid_d.reserve(static_cast<std::size_t>(grid_points));
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
        double t = grid_points == 1 ? lo : lo + (hi - lo) * double(i) / double(grid_points - 1);
        double d = confluent ? det_W(fw, anchors[0], M, t, opts) : det_V(fw, anchors, t, opts);
        rep.grid_t.push_back(t);
        rep.grid_d.push_back(d);
        if (d < best) { best = d; rep.argmin = t; }
    }
    rep.min_value = best;
    for (double x : anchors) {
        double d = confluent ? det_W(fw, anchors[0], M, x, opts) : det_V(fw, anchors, x, opts);
        rep.extension_points.push_back(d);
    }
    if (confluent) {
        rep.cramer_residuals.push_back(cramer_residual_W(fw, anchors[0], M));
    } else {
        for (int i = 0; i < int(anchors.size()); ++i) rep.cramer_residuals.push_back(cramer_residual(fw, anchors, i));
    }
    const int tuple_size = confluent ? 2 * M : 2 * int(anchors.size());
    if (fw.measure().is_discrete() && int(fw.measure().size()) <= 24 &&
        binomial_count(int(fw.measure().size()), tuple_size) <= opts.tuple_budget) {
        // three probe points clear of the anchors
        double span = hi - lo;
        double worst = 0.0;
        CauchyBinetResult cb{};
        bool have = false;
        for (double frac : {0.23, 0.52, 0.81}) {
            double t = lo + frac * span;
            double mind = std::numeric_limits<double>::infinity();
            for (double x : anchors) mind = std::min(mind, std::fabs(t - x));
            if (mind < 0.02 * span) t += 0.04 * span;
            cb = confluent ? cauchy_binet_check(fw, anchors[0], M, t, opts)
                           : cauchy_binet_check(fw, anchors, t, opts);
            worst = std::max(worst, cb.d_residual);
            have = true;
        }
        if (have) {
            rep.has_cauchy_binet = true;
            rep.cb_gram_residual = cb.gram_residual;
            rep.cb_d_residual_max = worst;
        }
    }
    return rep;
}

} // namespace

DeterminantReport determinant_report(const Framework& fw, const std::vector<double>& positions, double lo,
                                     double hi, int grid_points, const DeterminantOptions& opts) {
    check_positions(positions);
    return make_report(fw, positions, false, int(positions.size()), lo, hi, grid_points, opts);
}

DeterminantReport determinant_report_W(const Framework& fw, double x0, int M, double lo, double hi,
                                       int grid_points, const DeterminantOptions& opts) {
    return make_report(fw, {x0}, true, M, lo, hi, grid_points, opts);
}

} // namespace spikecert
