// Command-line front end: sequence analysis, generator construction,
// interpolation and the verification checks.
//
// Exit codes: 0 ok, 1 numerical failure, 2 validation, 3 construction failure,
// 4 no admissible generator.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <bernstein/bernstein.hpp>
#include <bernstein/io.hpp>

namespace
{

using bernstein::complex_t;
using bernstein::io::json;

constexpr int exit_numerical = 1;
constexpr int exit_validation = 2;
constexpr int exit_construction = 3;
constexpr int exit_missing_generator = 4;

struct grid_spec {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    std::size_t n = 0;
};

[[noreturn]] void invalid(const std::string &what)
{
    throw bernstein::error(bernstein::error_kind::validation, what);
}

grid_spec parse_grid(const std::string &s)
{
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() != 5) {
        invalid("--grid expects XMIN:XMAX:YMIN:YMAX:N");
    }
    grid_spec g;
    try {
        g.xmin = std::stod(parts[0]);
        g.xmax = std::stod(parts[1]);
        g.ymin = std::stod(parts[2]);
        g.ymax = std::stod(parts[3]);
        const long n = std::stol(parts[4]);
        if (n < 2) {
            invalid("--grid needs N >= 2");
        }
        g.n = static_cast<std::size_t>(n);
    } catch (const std::logic_error &) {
        invalid("--grid expects XMIN:XMAX:YMIN:YMAX:N");
    }
    return g;
}

std::vector<double> parse_list(const std::string &s, const char *flag)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::logic_error &) {
            invalid(std::string(flag) + " expects a comma-separated list of numbers");
        }
    }
    return out;
}

std::size_t grid_count(const std::string &s)
{
    long n = 0;
    try {
        n = std::stol(s);
    } catch (const std::logic_error &) {
        invalid("--x-grid expects auto or a point count");
    }
    if (n < 2) {
        invalid("--x-grid needs at least 2 points");
    }
    return static_cast<std::size_t>(n);
}

complex_t parse_complex(const std::string &s, const char *flag)
{
    const auto v = parse_list(s, flag);
    if (v.size() != 2) {
        invalid(std::string(flag) + " expects RE,IM");
    }
    return {v[0], v[1]};
}

json read_json(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        invalid("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        invalid(path + ": " + e.what());
    }
}

void emit(const json &j, const std::string &path)
{
    const std::string text = j.dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        invalid("cannot write " + path);
    }
    out << text;
}

std::ofstream open_csv(const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        invalid("cannot write " + path);
    }
    return out;
}

// Generator for interpolation: explicit in the sequence file, a shifted sine for
// unperturbed lattices, or a unit-spaced shifted sine when all nodes share one
// height and have integer real parts.
bernstein::generating_function choose_generator(const bernstein::io::sequence_spec &spec,
                                                const bernstein::discrete_sequence &nodes)
{
    if (spec.generator) {
        return bernstein::io::generator_from_json(*spec.generator);
    }
    if (spec.family == "lattice") {
        return bernstein::generating_function::shifted_sine(complex_t(0, spec.imag_offset - spec.reference_line),
                                                            spec.spacing);
    }
    const double h = nodes[0].imag();
    bool aligned = true;
    for (const auto &p : nodes.points()) {
        aligned = aligned && p.imag() == h && p.real() == std::nearbyint(p.real());
    }
    if (aligned) {
        return bernstein::generating_function::shifted_sine(complex_t(0, h), 1.0);
    }
    throw bernstein::error(bernstein::error_kind::missing_generator,
                           "no generating function is known for these nodes; add a \"generator\" to the sequence file");
}

struct options {
    std::string input;
    std::string second;
    std::string output;
    std::string grid;
    std::string csv;
    std::string x_grid = "auto";
    std::string radii;
    std::string values;
    std::string center = "0.5,0";
    std::string heights = "5,10,20,40";
    double delta = 0.05;
    double M = 8;
    double alpha = 1.0;
    double epsilon = 0.2;
    double radius = 1;
    double half_width = 10;
    std::size_t quad_points = 64;
    unsigned threads = 1;
    std::optional<double> max_c, max_balayage, max_carleson;
};

int run_analyze(const options &o)
{
    const auto spec = bernstein::io::parse_sequence_spec(read_json(o.input));
    const auto seq = bernstein::io::expand(spec);
    bernstein::analysis_options ao;
    ao.threads = o.threads;
    ao.separation_alpha = o.alpha;
    if (o.x_grid != "auto") {
        ao.x_grid = bernstein::uniform_x_grid(seq, grid_count(o.x_grid));
    }
    if (!o.radii.empty()) {
        ao.radii = parse_list(o.radii, "--radii");
    }
    const auto grid = ao.x_grid ? *ao.x_grid : bernstein::default_x_grid(seq);
    double x_max = 0;
    for (double x : grid) {
        x_max = std::max(x_max, std::abs(x));
    }
    ao.x_grid = grid;
    ao.balayage_tail = bernstein::io::balayage_tail_hint(spec, x_max);
    const auto report = bernstein::analyze(seq, ao);

    json out;
    out["sequence"] = json{{"family", seq.family_tag()},
                           {"size", seq.size()},
                           {"truncation_radius", bernstein::io::number(seq.truncation_radius())},
                           {"reference_line", spec.reference_line}};
    out["report"] = bernstein::io::to_json(report);
    bernstein::threshold_set th;
    th.local_counting = o.max_c;
    th.balayage = o.max_balayage;
    th.carleson = o.max_carleson;
    out["verdicts"] = bernstein::io::to_json(bernstein::apply_thresholds(report, th));
    emit(out, o.output);
    return 0;
}

int run_construct(const options &o)
{
    const auto spec = bernstein::io::parse_sequence_spec(read_json(o.input));
    const auto seq = bernstein::io::expand(spec);
    const auto built = bernstein::build_perturbed_sine(seq, o.delta);
    json out;
    out["generator"] = bernstein::io::to_json(built.function);
    out["certificate"] = bernstein::io::to_json(built.certificate);
    if (!o.grid.empty()) {
        if (o.csv.empty()) {
            invalid("--grid needs --csv PATH for the grid output");
        }
        const auto g = parse_grid(o.grid);
        auto csv = open_csv(o.csv);
        std::vector<std::vector<double>> rows;
        rows.reserve(g.n * g.n);
        for (const auto &z : bernstein::rectangular_grid(g.xmin, g.xmax, g.ymin, g.ymax, g.n)) {
            rows.push_back({z.real(), z.imag(), built.function.log_abs(z)});
        }
        bernstein::io::write_csv(csv, {"x", "y", "log_abs_F"}, rows);
        out["grid_rows"] = rows.size();
    }
    emit(out, o.output);
    return 0;
}

int run_interpolate(const options &o)
{
    const auto spec = bernstein::io::parse_sequence_spec(read_json(o.input));
    const auto nodes = bernstein::io::expand(spec);
    std::optional<std::vector<complex_t>> values = spec.values;
    double growth = spec.value_growth.value_or(0.0);
    if (!o.values.empty()) {
        const auto vj = read_json(o.values);
        if (vj.is_object()) {
            if (!vj.contains("values")) {
                invalid("values file needs a \"values\" list");
            }
            values = bernstein::io::detail::read_complex_list(vj["values"], "values");
            if (vj.contains("value_growth")) {
                growth = bernstein::io::detail::read_double(vj["value_growth"], "value_growth");
            }
        } else {
            values = bernstein::io::detail::read_complex_list(vj, "values");
        }
    }
    if (!values) {
        invalid("no values given (spec \"values\" or --values PATH)");
    }
    const auto generator = choose_generator(spec, nodes);
    const bernstein::weight_parameters params(o.M, 1.0, 0.0, growth);
    const bernstein::interpolant itp(generator, nodes, *values, params);

    std::vector<complex_t> probe;
    if (!o.grid.empty()) {
        const auto g = parse_grid(o.grid);
        probe = bernstein::rectangular_grid(g.xmin, g.xmax, g.ymin, g.ymax, g.n);
    } else {
        double hw = 1;
        for (const auto &p : nodes.points()) {
            hw = std::max(hw, std::abs(p.real()));
        }
        probe = bernstein::rectangular_grid(-hw, hw, -2, 2, 41);
    }
    const auto quality = bernstein::interpolation_report(itp, probe);

    json out;
    out["generator"] = bernstein::io::to_json(generator);
    out["nodes"] = nodes.size();
    out["weights"] = json{{"M", params.M()}, {"A", params.A()}, {"B", params.B()}, {"C", params.C()}};
    out["value_bound_K"] = bernstein::io::number(itp.value_bound());
    out["quality"] = bernstein::io::to_json(quality);
    if (!o.csv.empty()) {
        auto csv = open_csv(o.csv);
        std::vector<std::vector<double>> rows;
        rows.reserve(probe.size());
        for (const auto &z : probe) {
            const auto f = bernstein::interpolant_eval(itp, z).value;
            rows.push_back({z.real(), z.imag(), f.real(), f.imag(), std::abs(f)});
        }
        bernstein::io::write_csv(csv, {"x", "y", "re_f", "im_f", "abs_f"}, rows);
    }
    emit(out, o.output);
    return 0;
}

bernstein::generating_function generator_or_sine(const options &o)
{
    if (o.input.empty()) {
        return bernstein::generating_function::shifted_sine(0.0, 1.0);
    }
    const auto j = read_json(o.input);
    return bernstein::io::generator_from_json(j.contains("generator") ? j["generator"] : j);
}

int run_jensen(const options &o)
{
    const auto F = generator_or_sine(o);
    bernstein::jensen_options jo;
    jo.quad_points = o.quad_points;
    const auto res = bernstein::jensen_check(F, parse_complex(o.center, "--center"), o.radius, jo);
    json out;
    out["generator"] = bernstein::io::to_json(F);
    out["center"] = bernstein::io::to_json(parse_complex(o.center, "--center"));
    out["radius"] = o.radius;
    out["jensen"] = bernstein::io::to_json(res);
    emit(out, o.output);
    return 0;
}

int run_type_fit(const options &o)
{
    const auto F = generator_or_sine(o);
    const auto heights = parse_list(o.heights, "--heights");
    const auto est = bernstein::estimate_exponential_type(F, o.half_width, heights);
    json out;
    out["generator"] = bernstein::io::to_json(F);
    out["half_width"] = o.half_width;
    out["estimate"] = bernstein::io::to_json(est);
    emit(out, o.output);
    return 0;
}

int run_union_check(const options &o)
{
    const auto a = bernstein::io::expand(bernstein::io::parse_sequence_spec(read_json(o.input)));
    const auto b = bernstein::io::expand(bernstein::io::parse_sequence_spec(read_json(o.second)));
    std::optional<std::vector<double>> grid;
    if (o.x_grid != "auto") {
        grid = bernstein::uniform_x_grid(bernstein::merge(a, b), grid_count(o.x_grid));
    }
    const auto rep = bernstein::union_interpolation_check(a, b, o.epsilon, o.alpha, grid, o.threads);
    json out;
    out["union"] = bernstein::io::to_json(rep);
    emit(out, o.output);
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Interpolation sequences for entire functions of exponential type bounded on the real line"};
    app.require_subcommand(1);
    options o;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--output", o.output, "Output path (default: stdout)");
        cmd->add_option("--threads", o.threads, "Worker threads for grid evaluations")->check(CLI::PositiveNumber);
    };

    auto *analyze = app.add_subcommand("analyze", "Condition report for a sequence");
    analyze->add_option("--input", o.input, "Sequence spec (JSON)")->required();
    analyze->add_option("--x-grid", o.x_grid, "auto or a uniform point count");
    analyze->add_option("--radii", o.radii, "Comma-separated radii for the zero-set diagnostics");
    analyze->add_option("--alpha", o.alpha, "Decay rate for the separation profile");
    analyze->add_option("--max-C", o.max_c, "Threshold verdict for the local counting constant");
    analyze->add_option("--max-balayage", o.max_balayage, "Threshold verdict for the balayage supremum");
    analyze->add_option("--max-carleson", o.max_carleson, "Threshold verdict for the pairwise Carleson sum");
    add_common(analyze);

    auto *construct = app.add_subcommand("construct", "Perturbed-sine generating function for a sequence");
    construct->add_option("--input", o.input, "Sequence spec (JSON)")->required();
    construct->add_option("--delta", o.delta, "Zero clearance delta");
    construct->add_option("--grid", o.grid, "XMIN:XMAX:YMIN:YMAX:N grid for log|F|");
    construct->add_option("--csv", o.csv, "CSV path for the grid");
    add_common(construct);

    auto *interpolate = app.add_subcommand("interpolate", "Interpolate values on a sequence");
    interpolate->add_option("--input", o.input, "Sequence spec (JSON)")->required();
    interpolate->add_option("--values", o.values, "Values file (JSON)");
    interpolate->add_option("--M", o.M, "Weight shift rate M");
    interpolate->add_option("--grid", o.grid, "XMIN:XMAX:YMIN:YMAX:N probe grid");
    interpolate->add_option("--csv", o.csv, "CSV path for sampled f on the probe grid");
    add_common(interpolate);

    auto *jensen = app.add_subcommand("jensen", "Jensen formula residual for a generating function");
    jensen->add_option("--input", o.input, "Generator (JSON; default sin(pi z))");
    jensen->add_option("--center", o.center, "RE,IM");
    jensen->add_option("--radius", o.radius, "Circle radius");
    jensen->add_option("--quad-points", o.quad_points, "Initial trapezoid points");
    add_common(jensen);

    auto *type_fit = app.add_subcommand("type-fit", "Exponential type estimate of a generating function");
    type_fit->add_option("--input", o.input, "Generator (JSON; default sin(pi z))");
    type_fit->add_option("--half-width", o.half_width, "Half width of the horizontal segments");
    type_fit->add_option("--heights", o.heights, "Comma-separated heights (>= 1, increasing)");
    add_common(type_fit);

    auto *union_check = app.add_subcommand("union-check", "Compare two sequences with their union");
    union_check->add_option("--input", o.input, "First sequence spec (JSON)")->required();
    union_check->add_option("--second", o.second, "Second sequence spec (JSON)")->required();
    union_check->add_option("--epsilon", o.epsilon, "Separation epsilon");
    union_check->add_option("--alpha", o.alpha, "Separation alpha");
    union_check->add_option("--x-grid", o.x_grid, "auto or a uniform point count");
    add_common(union_check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_validation;
    }

    try {
        if (*analyze) {
            return run_analyze(o);
        }
        if (*construct) {
            return run_construct(o);
        }
        if (*interpolate) {
            return run_interpolate(o);
        }
        if (*jensen) {
            return run_jensen(o);
        }
        if (*type_fit) {
            return run_type_fit(o);
        }
        if (*union_check) {
            return run_union_check(o);
        }
    } catch (const bernstein::error &e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case bernstein::error_kind::validation:
            case bernstein::error_kind::incomplete_truncation:
                return exit_validation;
            case bernstein::error_kind::construction:
                return exit_construction;
            case bernstein::error_kind::missing_generator:
                return exit_missing_generator;
            case bernstein::error_kind::numerical:
                return exit_numerical;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    }
    return 0;
}
