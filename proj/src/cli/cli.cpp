#include "immse/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "immse/disturbance.hpp"
#include "immse/errors.hpp"
#include "immse/finite_length.hpp"
#include "immse/oracle.hpp"
#include "immse/superposition.hpp"
#include "parse.hpp"

namespace immse {

namespace {

using nlohmann::ordered_json;
using cli::format_double;

enum class Units { Nats, Bits };
enum class Format { Auto, Csv, Json };
enum class Check { Crossing, Immse, All };
enum class MethodChoice { Auto, Quadrature, MonteCarlo };

struct Options {
    std::string snrs;
    std::string betas;
    std::string alphas;
    std::string grid;
    std::string out;
    std::string design_file;
    std::string codebook;
    std::string codebook_file;
    Units units = Units::Nats;
    Format format = Format::Auto;
    Check check = Check::All;
    MethodChoice method = MethodChoice::Auto;
    double pe = 0.0;
    double rate = 0.0;
    double snr = 1.0;
    double variance = 0.0;
    double sigmas = kDefaultTolerances.significance_sigmas;
    bool db = false;
    bool strict_sum = false;
    std::uint64_t seed = 1;
    std::size_t samples = 100000;
    std::size_t grid_density = 16;

    // Set when the corresponding flag was given.
    bool has_rate = false;
    bool has_snr = false;
    bool has_variance = false;
};

double in_units(Rate r, Units u) { return u == Units::Bits ? r.bits() : r.nats(); }
double in_units(double nats, Units u) { return u == Units::Bits ? Rate::from_nats(nats).bits() : nats; }
const char* units_name(Units u) { return u == Units::Bits ? "bits" : "nats"; }

BetaCheck beta_check(const Options& o) { return o.strict_sum ? BetaCheck::StrictSum : BetaCheck::Monotone; }

Snr single_snr(const Options& o, const char* what)
{
    detail::require(o.has_snr, std::string(what) + " needs --snr");
    return cli::to_snrs({o.snr}, o.db, "--snr").front();
}

struct DesignResult {
    SuperpositionDesign design;
    std::vector<MmseConstraint> constraints;
};

DesignResult design_from_flags(const Options& o)
{
    detail::require(!o.snrs.empty(), "a design needs --snrs");
    const auto snrs = cli::to_snrs(cli::parse_list(o.snrs, "--snrs"), o.db, "--snrs");
    SnrLadder ladder(snrs);
    const std::size_t k = ladder.constrained();
    detail::require(o.betas.empty() || o.alphas.empty(), "give either --betas or --alphas, not both");

    std::vector<double> betas;
    if (!o.betas.empty()) {
        betas = cli::parse_list(o.betas, "--betas");
    } else if (!o.alphas.empty()) {
        const auto alphas = cli::parse_list(o.alphas, "--alphas");
        detail::require(alphas.size() == k, "--alphas needs one value per constrained SNR");
        for (std::size_t i = 0; i < k; ++i) {
            detail::require(alphas[i] >= 0.0 && alphas[i] <= 1.0, "--alphas must lie in [0, 1]");
            betas.push_back(alpha_to_beta(snrs[i], snrs[k], alphas[i]));
        }
    }
    detail::require(betas.size() == k, "--betas needs one value per SNR below the last");

    std::vector<MmseConstraint> constraints;
    for (std::size_t i = 0; i < k; ++i) {
        detail::require(betas[i] >= 0.0 && betas[i] <= 1.0, "--betas must lie in [0, 1]");
        constraints.push_back({snrs[i], betas[i]});
    }
    auto optimum = max_rate_multi(constraints, snrs[k], beta_check(o));
    return {std::move(optimum.design), std::move(optimum.constraints)};
}

SuperpositionDesign design_from_file(const Options& o)
{
    std::ifstream in(o.design_file);
    detail::require(static_cast<bool>(in), "cannot open design file '" + o.design_file + "'");
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
        std::vector<Snr> snrs;
        for (double s : doc.at("snrs").get<std::vector<double>>()) {
            snrs.push_back(Snr(s));
        }
        return make_design(SnrLadder(std::move(snrs)), doc.at("betas").get<std::vector<double>>(), beta_check(o));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("malformed design file '" + o.design_file + "': " + e.what());
    }
}

SuperpositionDesign resolve_design(const Options& o)
{
    if (!o.design_file.empty()) {
        detail::require(o.snrs.empty() && o.betas.empty() && o.alphas.empty(),
                        "--design replaces --snrs/--betas/--alphas");
        return design_from_file(o);
    }
    return design_from_flags(o).design;
}

ordered_json design_json(const SuperpositionDesign& d, const std::vector<MmseConstraint>* constraints, const Options& o)
{
    ordered_json j;
    std::vector<double> snrs;
    for (const auto& s : d.ladder().points()) {
        snrs.push_back(s.value());
    }
    std::vector<double> rates;
    for (const auto& r : d.layer_rates()) {
        rates.push_back(in_units(r, o.units));
    }
    j["snrs"] = snrs;
    j["betas"] = std::vector<double>(d.betas().begin(), d.betas().end());
    j["layer_powers"] = d.layer_powers();
    j["layer_rates"] = rates;
    j["total_rate"] = in_units(d.total_rate(), o.units);
    j["units"] = units_name(o.units);
    if (constraints) {
        ordered_json list = ordered_json::array();
        for (const auto& c : *constraints) {
            list.push_back({{"snr", c.snr.value()}, {"beta", c.beta}});
        }
        j["constraints"] = list;
    }
    return j;
}

std::string cmd_design(const Options& o)
{
    const auto result = design_from_flags(o);
    const auto& d = result.design;
    if (o.format == Format::Json) {
        return design_json(d, &result.constraints, o).dump(2) + "\n";
    }
    std::ostringstream csv;
    csv << "layer,snr,beta,power,rate\n";
    const auto powers = d.layer_powers();
    for (std::size_t i = 0; i < d.ladder().size(); ++i) {
        csv << i << ',' << format_double(d.ladder()[i].value()) << ','
            << (i < d.betas().size() ? format_double(d.betas()[i]) : "") << ',' << format_double(powers[i]) << ','
            << format_double(in_units(d.layer_rates()[i], o.units)) << '\n';
    }
    csv << "total,,,1," << format_double(in_units(d.total_rate(), o.units)) << '\n';
    return csv.str();
}

std::string cmd_curve(const Options& o)
{
    const auto design = resolve_design(o);
    detail::require(!o.grid.empty(), "curve needs --grid");
    const auto grid = cli::parse_grid(o.grid, o.db);
    const auto mmse = mmse_curve(design);
    const auto mi = mi_curve(design);

    struct Row {
        double gamma, mmse, mi;
    };
    std::vector<Row> rows;
    const auto breaks = design.ladder().points();
    std::size_t next_break = 0;
    for (const auto& g : grid) {
        // Breakpoints inside the grid range get two rows: the value
        // approached from below, then the value at the point.
        while (next_break < breaks.size() && breaks[next_break] <= g) {
            const double b = breaks[next_break].value();
            if (b > grid.front().value()) {
                rows.push_back({b, mmse.left_limit(b), mi.left_limit(b)});
                if (b < g.value()) {
                    rows.push_back({b, mmse(b), mi(b)});
                }
            }
            ++next_break;
        }
        rows.push_back({g.value(), mmse(g.value()), mi(g.value())});
    }

    if (o.format == Format::Json) {
        ordered_json j;
        j["units"] = units_name(o.units);
        j["design"] = design_json(design, nullptr, o);
        ordered_json list = ordered_json::array();
        for (const auto& r : rows) {
            list.push_back({{"gamma", r.gamma}, {"mmse", r.mmse}, {"mi", in_units(r.mi, o.units)}});
        }
        j["rows"] = list;
        return j.dump(2) + "\n";
    }
    std::ostringstream csv;
    csv << "gamma,mmse,mi\n";
    for (const auto& r : rows) {
        csv << format_double(r.gamma) << ',' << format_double(r.mmse) << ','
            << format_double(in_units(r.mi, o.units)) << '\n';
    }
    return csv.str();
}

std::string cmd_bound(const Options& o)
{
    const Snr snr1 = single_snr(o, "bound");
    detail::require(o.has_rate != !o.alphas.empty(), "bound needs exactly one of --rate or --alpha");
    const auto params = [&] {
        if (o.has_rate) {
            const Rate r = o.units == Units::Bits ? Rate::from_bits(o.rate) : Rate::from_nats(o.rate);
            return FiniteLengthParams::from_rate(snr1, r, o.pe);
        }
        const auto alphas = cli::parse_list(o.alphas, "--alpha");
        detail::require(alphas.size() == 1, "bound takes a single --alpha");
        return FiniteLengthParams(snr1, alphas.front(), o.pe);
    }();
    detail::require(!o.grid.empty(), "bound needs --grid");
    const auto grid = cli::parse_grid(o.grid, o.db);

    std::vector<std::pair<FiniteLengthBound, double>> rows;
    for (const auto& g : grid) {
        rows.emplace_back(finite_length_mmse_lower_bound(params, g), gaussian_mmse(Variance(1.0), g));
    }

    if (o.format == Format::Json) {
        ordered_json j;
        j["snr1"] = snr1.value();
        j["alpha"] = params.alpha();
        j["rate"] = in_units(params.rate(), o.units);
        j["units"] = units_name(o.units);
        j["pe"] = params.pe();
        ordered_json list = ordered_json::array();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            list.push_back({{"snr0", grid[i].value()},
                            {"bound", rows[i].first.value},
                            {"uncoded", rows[i].second},
                            {"vacuous", rows[i].first.vacuous}});
        }
        j["rows"] = list;
        return j.dump(2) + "\n";
    }
    std::ostringstream csv;
    csv << "snr0,bound,uncoded,vacuous\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv << format_double(grid[i].value()) << ',' << format_double(rows[i].first.value) << ','
            << format_double(rows[i].second) << ',' << (rows[i].first.vacuous ? 1 : 0) << '\n';
    }
    return csv.str();
}

std::string cmd_disturbance(const Options& o)
{
    detail::require(!o.snrs.empty() && !o.alphas.empty(), "disturbance needs --snrs and --alphas");
    const auto snrs = cli::to_snrs(cli::parse_list(o.snrs, "--snrs"), o.db, "--snrs");
    const auto alphas = cli::parse_list(o.alphas, "--alphas");
    detail::require(snrs.size() == alphas.size(), "--snrs and --alphas need the same length");
    std::vector<DisturbanceConstraint> entries;
    for (std::size_t i = 0; i < snrs.size(); ++i) {
        entries.push_back({snrs[i], alphas[i]});
    }
    const DisturbanceConstraintSet set(std::move(entries));
    const double alpha = effective_alpha(set);

    ordered_json j;
    j["units"] = units_name(o.units);
    j["effective_alpha"] = alpha;
    if (o.has_snr) {
        const Snr target = single_snr(o, "disturbance");
        j["snr"] = target.value();
        j["max_rate"] = in_units(disturbance_max_rate(set, target), o.units);
        if (snrs.size() == 1) {
            const auto point = rate_disturbance_point(snrs.front(), target, alpha);
            j["min_disturbance"] = in_units(point.min_disturbance, o.units);
        }
    }

    if (o.format == Format::Csv) {
        std::ostringstream header;
        std::ostringstream values;
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            header << (first ? "" : ",") << key;
            values << (first ? "" : ",") << (value.is_string() ? value.get<std::string>() : format_double(value.get<double>()));
            first = false;
        }
        return header.str() + "\n" + values.str() + "\n";
    }
    return j.dump(2) + "\n";
}

struct VerifyOutcome {
    std::string text;
    bool pass = true;
};

VerifyOutcome cmd_verify(const Options& o)
{
    detail::require(o.format != Format::Csv, "verify reports are JSON only");
    detail::require(o.codebook.empty() != o.codebook_file.empty(), "verify needs exactly one of --codebook or --codebook-file");
    const auto codebook = o.codebook.empty() ? cli::read_codebook_file(o.codebook_file)
                                             : cli::parse_codebook(o.codebook, o.seed);

    Tolerances tol;
    tol.significance_sigmas = o.sigmas;
    detail::require(o.sigmas > 0.0, "--sigmas must be positive");

    bool quadrature = false;
    switch (o.method) {
    case MethodChoice::Auto: quadrature = codebook.dim() == 1; break;
    case MethodChoice::Quadrature:
        detail::require(codebook.dim() == 1, "quadrature needs a one-dimensional codebook");
        quadrature = true;
        break;
    case MethodChoice::MonteCarlo: break;
    }

    ordered_json report;
    report["codebook"] = {{"size", codebook.size()}, {"dim", codebook.dim()}};
    report["method"] = quadrature ? "quadrature" : "monte-carlo";
    report["units"] = "nats";
    report["sigmas"] = tol.significance_sigmas;
    if (!quadrature) {
        report["seed"] = o.seed;
        report["samples"] = o.samples;
    }
    ordered_json checks = ordered_json::array();
    bool pass = true;
    const auto atoms = quadrature ? scalar_atoms(codebook) : std::vector<ScalarAtom>{};

    if (o.check != Check::Immse) {
        const auto grid = o.grid.empty() ? cli::parse_grid("0,0.25,0.5,1,2,4,8,16", false) : cli::parse_grid(o.grid, o.db);
        const Variance variance(o.has_variance ? o.variance : std::min(1.0, codebook.average_power()));
        const auto r = quadrature ? verify_single_crossing_quadrature(atoms, variance, grid, tol)
                                  : verify_single_crossing(codebook, variance, grid, o.samples, o.seed, tol);
        ordered_json points = ordered_json::array();
        for (std::size_t i = 0; i < r.grid.size(); ++i) {
            points.push_back({{"gamma", r.grid[i].value()}, {"q", r.q_values[i]}, {"error", r.q_errors[i]}});
        }
        ordered_json c;
        c["check"] = "crossing";
        c["pass"] = r.pass;
        c["variance"] = variance.value();
        c["first_nonnegative_index"] = r.first_nonnegative_index ? ordered_json(*r.first_nonnegative_index) : ordered_json();
        c["violation"] = r.violation ? ordered_json({r.violation->first, r.violation->second}) : ordered_json();
        c["points"] = points;
        checks.push_back(c);
        pass = pass && r.pass;
    }
    if (o.check != Check::Crossing) {
        const Snr snr = o.has_snr ? single_snr(o, "verify") : Snr(1.0);
        const auto r = quadrature ? verify_immse_identity_quadrature(atoms, snr, o.grid_density, tol)
                                  : verify_immse_identity(codebook, snr, o.grid_density, o.samples, o.seed, tol);
        ordered_json c;
        c["check"] = "immse";
        c["pass"] = r.pass;
        c["snr"] = r.snr;
        c["mutual_information"] = r.mutual_information;
        c["mi_std_error"] = r.mi_std_error;
        c["half_integral"] = r.half_integral;
        c["integral_std_error"] = r.integral_std_error;
        c["quadrature_error"] = r.quadrature_error;
        c["residual"] = r.residual;
        c["budget"] = r.budget;
        c["nodes"] = r.nodes;
        checks.push_back(c);
        pass = pass && r.pass;
    }
    report["checks"] = checks;
    report["pass"] = pass;
    return {report.dump(2) + "\n", pass};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Rate and MMSE trade-offs of MMSE-constrained codes on the scalar Gaussian channel", "immse"};
    app.set_config("--config", "", "key=value file mirroring the flags; flags on the command line win");
    app.require_subcommand(1);

    const std::map<std::string, Units> units_map{{"nats", Units::Nats}, {"bits", Units::Bits}};
    const std::map<std::string, Format> format_map{{"csv", Format::Csv}, {"json", Format::Json}};
    const std::map<std::string, Check> check_map{{"crossing", Check::Crossing}, {"immse", Check::Immse}, {"all", Check::All}};
    const std::map<std::string, MethodChoice> method_map{
        {"auto", MethodChoice::Auto}, {"quadrature", MethodChoice::Quadrature}, {"monte-carlo", MethodChoice::MonteCarlo}};

    app.add_option("--snrs", o.snrs, "comma-separated SNRs (linear unless --db)")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--betas", o.betas, "comma-separated MMSE constraint levels")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--alpha,--alphas", o.alphas, "comma-separated power fractions")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::Join);
    auto* pe = app.add_option("--pe", o.pe, "block error probability")->check(CLI::Range(0.0, 0.5));
    auto* rate = app.add_option("--rate", o.rate, "code rate in --units")->check(CLI::NonNegativeNumber);
    auto* snr = app.add_option("--snr", o.snr, "operating SNR: snr1 for bound, target for disturbance and verify");
    app.add_option("--grid", o.grid, "start:stop:step, start:stop@count, or a comma list")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--units", o.units, "nats or bits")->transform(CLI::CheckedTransformer(units_map));
    app.add_flag("--db", o.db, "read SNR inputs in dB");
    app.add_option("--format", o.format, "csv or json")->transform(CLI::CheckedTransformer(format_map));
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--samples", o.samples, "Monte Carlo samples per point")->check(CLI::PositiveNumber);
    app.add_option("--out", o.out, "write output to this file");
    app.add_flag("--strict-sum", o.strict_sum, "also require the betas to sum to at most 1");
    app.add_option("--design", o.design_file, "design JSON written by the design subcommand");
    app.add_option("--codebook", o.codebook, "bpsk, random:M=<count>,n=<dim>, or rows a,b;c,d")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--codebook-file", o.codebook_file, "one codeword per line");
    app.add_option("--check", o.check, "crossing, immse, or all")->transform(CLI::CheckedTransformer(check_map));
    auto* variance = app.add_option("--variance", o.variance, "Gaussian reference variance for the crossing check")
                         ->check(CLI::Range(0.0, 1.0));
    app.add_option("--method", o.method, "auto, quadrature, or monte-carlo")->transform(CLI::CheckedTransformer(method_map));
    app.add_option("--grid-density", o.grid_density, "trapezoid intervals for the identity check")->check(CLI::PositiveNumber);
    app.add_option("--sigmas", o.sigmas, "standard errors allowed by statistical verdicts");
    (void)pe;

    auto* design = app.add_subcommand("design", "maximum-rate superposition design");
    auto* curve = app.add_subcommand("curve", "MMSE and mutual information along a grid");
    auto* bound = app.add_subcommand("bound", "finite-length MMSE lower bound");
    auto* disturbance = app.add_subcommand("disturbance", "rate under mutual-information disturbance constraints");
    auto* verify = app.add_subcommand("verify", "check single crossing and the I-MMSE identity on a codebook");
    for (auto* sub : {design, curve, bound, disturbance, verify}) {
        sub->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    o.has_rate = rate->count() > 0;
    o.has_snr = snr->count() > 0;
    o.has_variance = variance->count() > 0;

    try {
        std::string text;
        int code = kExitOk;
        if (*design) {
            if (o.format == Format::Auto) o.format = Format::Csv;
            text = cmd_design(o);
        } else if (*curve) {
            if (o.format == Format::Auto) o.format = Format::Csv;
            text = cmd_curve(o);
        } else if (*bound) {
            if (o.format == Format::Auto) o.format = Format::Csv;
            text = cmd_bound(o);
        } else if (*disturbance) {
            text = cmd_disturbance(o);
        } else {
            auto outcome = cmd_verify(o);
            text = std::move(outcome.text);
            code = outcome.pass ? kExitOk : kExitVerificationFailed;
        }

        if (o.out.empty()) {
            out << text;
        } else {
            std::ofstream file(o.out, std::ios::binary);
            if (!(file << text)) {
                err << "error: cannot write '" << o.out << "'\n";
                return kExitUsage;
            }
        }
        return code;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const OutOfValidity& e) {
        err << "out of validity: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const BudgetExceeded& e) {
        err << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace immse
