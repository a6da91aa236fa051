#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "conditions.hpp"
#include "error.hpp"
#include "generating.hpp"
#include "sequence.hpp"
#include "verification.hpp"

namespace bernstein::io
{

using json = nlohmann::ordered_json;

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline json number(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return format_double(v);
}

inline json to_json(complex_t z)
{
    return json::array({number(z.real()), number(z.imag())});
}

// ---------------------------------------------------------------------------
// Reading
// ---------------------------------------------------------------------------

namespace detail
{

[[noreturn]] inline void bad_field(const std::string &field, const std::string &why)
{
    bernstein::detail::fail(error_kind::validation, "field '" + field + "': " + why);
}

inline double read_double(const json &j, const std::string &field)
{
    if (!j.is_number()) {
        bad_field(field, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        bad_field(field, "expected a finite number");
    }
    return v;
}

inline complex_t read_complex(const json &j, const std::string &field)
{
    if (j.is_number()) {
        return {read_double(j, field), 0.0};
    }
    if (!j.is_array() || j.size() != 2) {
        bad_field(field, "expected [re, im]");
    }
    return {read_double(j[0], field + "[0]"), read_double(j[1], field + "[1]")};
}

inline std::vector<complex_t> read_complex_list(const json &j, const std::string &field)
{
    if (!j.is_array()) {
        bad_field(field, "expected a list of [re, im] pairs");
    }
    std::vector<complex_t> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(read_complex(j[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

} // namespace detail

/// A sequence given either as an explicit point list or as a lattice family
/// {k spacing + i imag_offset : |k| <= half_width}, optionally with per-index
/// complex offsets.
struct sequence_spec {
    std::string family = "custom"; // lattice | perturbed_lattice | custom
    double imag_offset = 1;
    double spacing = 1;
    std::int64_t half_width = 0;
    std::vector<std::pair<std::int64_t, complex_t>> perturbations;
    std::vector<complex_t> points;
    std::optional<double> truncation_radius;
    /// Horizontal line playing the role of the real axis; points are shifted
    /// down by i * reference_line on expansion.
    double reference_line = 0;
    std::optional<std::vector<complex_t>> values;
    std::optional<double> value_growth; // C in |v_l| <= K e^{C|Im l|}
    std::optional<json> generator;
};

inline sequence_spec parse_sequence_spec(const json &j)
{
    using detail::bad_field;
    if (!j.is_object()) {
        bernstein::detail::fail(error_kind::validation, "sequence spec must be an object");
    }
    sequence_spec s;
    if (j.contains("family")) {
        if (!j["family"].is_string()) {
            bad_field("family", "expected a string");
        }
        s.family = j["family"].get<std::string>();
    }
    if (s.family != "lattice" && s.family != "perturbed_lattice" && s.family != "custom") {
        bad_field("family", "unknown family '" + s.family + "' (lattice | perturbed_lattice | custom)");
    }
    if (s.family == "custom") {
        if (!j.contains("points")) {
            bad_field("points", "a custom sequence needs an explicit point list");
        }
        s.points = detail::read_complex_list(j["points"], "points");
    } else {
        if (j.contains("imag_offset")) {
            s.imag_offset = detail::read_double(j["imag_offset"], "imag_offset");
        }
        if (j.contains("spacing")) {
            s.spacing = detail::read_double(j["spacing"], "spacing");
            if (s.spacing <= 0) {
                bad_field("spacing", "must be positive");
            }
        }
        if (!j.contains("half_width") || !j["half_width"].is_number_integer() || j["half_width"].get<std::int64_t>() < 0) {
            bad_field("half_width", "expected a nonnegative integer");
        }
        s.half_width = j["half_width"].get<std::int64_t>();
        if (j.contains("perturbations")) {
            const auto &pl = j["perturbations"];
            if (!pl.is_array()) {
                bad_field("perturbations", "expected a list of [index, [re, im]]");
            }
            for (std::size_t i = 0; i < pl.size(); ++i) {
                const std::string f = "perturbations[" + std::to_string(i) + "]";
                if (!pl[i].is_array() || pl[i].size() != 2 || !pl[i][0].is_number_integer()) {
                    bad_field(f, "expected [index, [re, im]]");
                }
                const auto k = pl[i][0].get<std::int64_t>();
                if (k < -s.half_width || k > s.half_width) {
                    bad_field(f, "index outside the lattice");
                }
                s.perturbations.emplace_back(k, detail::read_complex(pl[i][1], f + "[1]"));
            }
        }
        if (s.family == "lattice" && !s.perturbations.empty()) {
            bad_field("perturbations", "only perturbed_lattice takes perturbations");
        }
    }
    if (j.contains("truncation_radius")) {
        s.truncation_radius = detail::read_double(j["truncation_radius"], "truncation_radius");
    }
    if (j.contains("reference_line")) {
        s.reference_line = detail::read_double(j["reference_line"], "reference_line");
    }
    if (j.contains("values")) {
        s.values = detail::read_complex_list(j["values"], "values");
    }
    if (j.contains("value_growth")) {
        s.value_growth = detail::read_double(j["value_growth"], "value_growth");
        if (*s.value_growth < 0) {
            bad_field("value_growth", "must be nonnegative");
        }
    }
    if (j.contains("generator")) {
        s.generator = j["generator"];
    }
    return s;
}

inline discrete_sequence expand(const sequence_spec &s)
{
    std::vector<complex_t> pts;
    const complex_t line_shift(0, -s.reference_line);
    if (s.family == "custom") {
        pts = s.points;
    } else {
        for (std::int64_t k = -s.half_width; k <= s.half_width; ++k) {
            pts.emplace_back(static_cast<double>(k) * s.spacing, s.imag_offset);
        }
        for (const auto &[k, off] : s.perturbations) {
            pts[static_cast<std::size_t>(k + s.half_width)] += off;
        }
    }
    for (auto &p : pts) {
        p += line_shift;
    }
    double radius = std::numeric_limits<double>::infinity();
    if (s.truncation_radius) {
        radius = *s.truncation_radius;
    } else if (s.family != "custom") {
        // complete up to the largest included modulus, but never past the first omitted site
        radius = 0;
        for (const auto &p : pts) {
            radius = std::max(radius, std::abs(p));
        }
        const double omitted =
            std::abs(complex_t(static_cast<double>(s.half_width + 1) * s.spacing, s.imag_offset - s.reference_line));
        if (radius >= omitted) {
            bernstein::detail::fail(error_kind::validation,
                                    "perturbations move points past the first omitted lattice site; "
                                    "declare truncation_radius explicitly");
        }
    }
    if (pts.empty()) {
        bernstein::detail::fail(error_kind::validation, "sequence has no points");
    }
    const std::string tag = s.family == "custom" ? "custom" : s.family;
    return discrete_sequence(std::move(pts), radius, tag);
}

/// Balayage tail bound for unperturbed lattices, evaluated for |x| <= x_max.
inline std::optional<double> balayage_tail_hint(const sequence_spec &s, double x_max)
{
    if (s.family != "lattice") {
        return std::nullopt;
    }
    return lattice_balayage_tail(s.imag_offset - s.reference_line, s.spacing, static_cast<long>(s.half_width), x_max);
}

/// Explicit-point form of an expanded sequence.
inline json to_json(const discrete_sequence &seq)
{
    json j;
    j["family"] = "custom";
    json pts = json::array();
    for (const auto &p : seq.points()) {
        pts.push_back(to_json(p));
    }
    j["points"] = std::move(pts);
    if (std::isfinite(seq.truncation_radius())) {
        j["truncation_radius"] = seq.truncation_radius();
    }
    return j;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

inline json to_json(const generating_function &F)
{
    json j;
    j["kind"] = to_string(F.kind());
    switch (F.kind()) {
        case generator_kind::shifted_sine:
            j["shift"] = to_json(F.shift());
            j["spacing"] = F.spacing();
            break;
        case generator_kind::perturbed_sine: {
            j["delta"] = F.delta();
            // ascending: -k_n, ..., -k_1, k_1, ..., k_n
            json ordered = json::array();
            for (auto it = F.perturbed().rbegin(); it != F.perturbed().rend(); ++it) {
                ordered.push_back(json{{"k", -it->k}, {"epsilon", it->epsilon}});
            }
            for (const auto &p : F.perturbed()) {
                ordered.push_back(json{{"k", p.k}, {"epsilon", p.epsilon}});
            }
            j["perturbed_indices"] = std::move(ordered);
            break;
        }
        case generator_kind::finite_product: {
            json z = json::array();
            for (const auto &zeta : F.finite_zeros()) {
                z.push_back(to_json(zeta));
            }
            j["zeros"] = std::move(z);
            j["in_bernstein_algebra"] = false;
            break;
        }
    }
    return j;
}

inline generating_function generator_from_json(const json &j)
{
    using detail::bad_field;
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        bad_field("generator.kind", "expected shifted_sine | perturbed_sine | finite_product");
    }
    const auto kind = j["kind"].get<std::string>();
    if (kind == "shifted_sine") {
        const complex_t shift = j.contains("shift") ? detail::read_complex(j["shift"], "generator.shift") : complex_t{};
        const double spacing = j.contains("spacing") ? detail::read_double(j["spacing"], "generator.spacing") : 1.0;
        return generating_function::shifted_sine(shift, spacing);
    }
    if (kind == "perturbed_sine") {
        if (!j.contains("delta")) {
            bad_field("generator.delta", "missing");
        }
        const double delta = detail::read_double(j["delta"], "generator.delta");
        std::vector<perturbed_index> pos;
        std::vector<perturbed_index> neg;
        if (j.contains("perturbed_indices")) {
            for (const auto &e : j["perturbed_indices"]) {
                if (!e.is_object() || !e.contains("k") || !e["k"].is_number_integer() || !e.contains("epsilon")) {
                    bad_field("generator.perturbed_indices", "expected {k, epsilon} entries");
                }
                const auto k = e["k"].get<std::int64_t>();
                const double eps = detail::read_double(e["epsilon"], "generator.perturbed_indices.epsilon");
                if (k == 0) {
                    bad_field("generator.perturbed_indices", "index 0 cannot be perturbed");
                }
                (k > 0 ? pos : neg).push_back({k > 0 ? k : -k, eps});
            }
        }
        // negative entries are optional but must mirror the positive ones
        for (const auto &n : neg) {
            const auto it = std::find_if(pos.begin(), pos.end(), [&](const perturbed_index &p) { return p.k == n.k; });
            if (it == pos.end() || it->epsilon != n.epsilon) {
                bad_field("generator.perturbed_indices", "eps_{-k} must equal eps_k for k = " + std::to_string(n.k));
            }
        }
        return generating_function::perturbed_sine(std::move(pos), delta);
    }
    if (kind == "finite_product") {
        return generating_function::finite_product(detail::read_complex_list(j.value("zeros", json::array()), "generator.zeros"));
    }
    bad_field("generator.kind", "unknown kind '" + kind + "'");
}

inline json to_json(const sine_certificate &c)
{
    json j;
    j["epsilon"] = number(c.epsilon);
    j["min_abs_value"] = number(c.min_abs_value);
    j["min_zero_distance"] = number(c.min_zero_distance);
    j["origin_distance"] = number(c.origin_distance);
    return j;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json to_json(const separation_profile &s)
{
    json j;
    j["epsilon"] = number(s.epsilon);
    j["alpha"] = number(s.alpha);
    j["feasible"] = s.feasible;
    json w = json::array();
    for (const auto &p : s.witnesses) {
        w.push_back(json{{"first", p.first},
                         {"second", p.second},
                         {"first_point", to_json(p.first_point)},
                         {"second_point", to_json(p.second_point)},
                         {"distance", number(p.distance)},
                         {"radius_sum", number(p.radius_sum)}});
    }
    j["witnesses"] = std::move(w);
    return j;
}

inline json to_json(const condition_report &r)
{
    json j;
    {
        const auto &f = r.favorov;
        json fj;
        fj["base_point"] = number(f.base_point);
        json ps = json::array();
        for (const auto &[R, s] : f.partial_sums) {
            ps.push_back(json::array({number(R), to_json(s)}));
        }
        fj["partial_sums"] = std::move(ps);
        json dc = json::array();
        for (const auto &[t, v] : f.density_curve) {
            dc.push_back(json::array({number(t), number(v)}));
        }
        fj["density_curve"] = std::move(dc);
        fj["linear_density"] = number(f.linear_density);
        json ic = json::array();
        for (const auto &[t, v] : f.increment_curve) {
            ic.push_back(json::array({number(t), number(v)}));
        }
        fj["increment_curve"] = std::move(ic);
        fj["balance_sup"] = number(f.balance_sup);
        fj["balance_argmax"] = number(f.balance_argmax);
        j["favorov"] = std::move(fj);
    }
    {
        const auto &lc = r.local_counting;
        json lj;
        lj["c_estimate"] = number(lc.c_estimate);
        lj["argmax"] = lc.argmax ? json(*lc.argmax) : json(nullptr);
        json pp = json::array();
        for (const auto &e : lc.per_point) {
            pp.push_back(json{{"index", e.index}, {"point", to_json(e.point)}, {"N", number(e.integrated)},
                              {"ratio", number(e.ratio)}});
        }
        lj["per_point"] = std::move(pp);
        lj["skipped"] = lc.skipped;
        j["local_counting"] = std::move(lj);
    }
    {
        const auto &b = r.balayage;
        json bj;
        bj["sup"] = number(b.sup);
        bj["argmax"] = number(b.argmax);
        bj["tail_bound"] = b.tail_bound ? number(*b.tail_bound) : json(nullptr);
        bj["grid_size"] = b.values.size();
        j["balayage"] = std::move(bj);
    }
    {
        const auto &c = r.carleson;
        json cj;
        cj["sup"] = number(c.sup);
        cj["argmax"] = c.argmax ? json(*c.argmax) : json(nullptr);
        auto table = [](const std::vector<carleson_entry> &v) {
            json t = json::array();
            for (const auto &e : v) {
                t.push_back(json{{"index", e.index}, {"point", to_json(e.point)}, {"value", number(e.value)}});
            }
            return t;
        };
        cj["upper"] = table(c.upper);
        cj["lower"] = table(c.lower);
        j["carleson"] = std::move(cj);
    }
    j["separation"] = to_json(r.separation);
    json ks = json::array();
    for (const auto &k : r.kernel_samples) {
        ks.push_back(json{{"point", to_json(k.point)}, {"x", number(k.x)}, {"P", number(k.value)}});
    }
    j["kernel_samples"] = std::move(ks);
    return j;
}

inline json to_json(const std::vector<verdict> &vs)
{
    json j = json::array();
    for (const auto &v : vs) {
        j.push_back(json{{"name", v.name}, {"value", number(v.value)}, {"threshold", number(v.threshold)}, {"passed", v.passed}});
    }
    return j;
}

inline json to_json(const exponential_type_estimate &e)
{
    json j;
    j["A_hat"] = number(e.A_hat);
    j["sigma_hat"] = number(e.sigma_hat);
    j["residual"] = number(e.residual);
    j["heights_used"] = e.heights_used;
    j["upper_slope"] = number(e.upper_slope);
    j["lower_slope"] = number(e.lower_slope);
    return j;
}

inline json to_json(const jensen_result &r)
{
    json j;
    j["residual"] = number(r.residual);
    j["circle_mean"] = number(r.circle_mean);
    j["center_log"] = number(r.center_log);
    j["counting"] = number(r.counting);
    j["nodes"] = r.nodes;
    return j;
}

inline json to_json(const interpolation_quality &q)
{
    json j;
    j["max_node_residual"] = number(q.max_node_residual);
    j["value_bound"] = number(q.value_bound);
    j["stability_constant"] = number(q.stability_constant);
    j["probe_sup"] = number(q.probe_sup);
    j["type"] = q.type ? to_json(*q.type) : json(nullptr);
    j["min_weighted_derivative"] = number(q.min_weighted_derivative);
    return j;
}

inline json to_json(const union_report &u)
{
    json j;
    j["common_radius"] = number(u.common_radius);
    j["sizes"] = json::array({u.sizes.first, u.sizes.second});
    j["separation"] = to_json(u.separation);
    j["c_first"] = number(u.c_first);
    j["c_second"] = number(u.c_second);
    j["c_union"] = number(u.c_union);
    j["cross_term"] = number(u.cross_term);
    j["local_counting_consistent"] = u.local_counting_consistent;
    j["balayage_first"] = number(u.balayage_first);
    j["balayage_second"] = number(u.balayage_second);
    j["balayage_union"] = number(u.balayage_union);
    j["additivity_error"] = number(u.additivity_error);
    j["relative_additivity_error"] = number(u.relative_additivity_error);
    j["grid_size"] = u.x_grid.size();
    return j;
}

/// Writes `header` then one comma-separated row per entry; LF line endings.
template <typename Rows>
void write_csv(std::ostream &os, const std::vector<std::string> &header, const Rows &rows)
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        os << (i ? "," : "") << header[i];
    }
    os << '\n';
    for (const auto &row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << format_double(row[i]);
        }
        os << '\n';
    }
}

} // namespace bernstein::io
