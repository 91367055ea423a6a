#include "acnote/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "acnote/analytic.hpp"
#include "acnote/error.hpp"
#include "acnote/keyvalue.hpp"
#include "acnote/montecarlo.hpp"
#include "acnote/path.hpp"
#include "acnote/payoff.hpp"
#include "acnote/terms.hpp"

namespace acnote::cli {

namespace {

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

std::string percent(double fraction) {
    return fixed(fraction * 100.0, 1) + "%";
}

std::string read_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open '" + file + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Terms from a file; diagnostics go to `err`. Throws DomainError on errors.
NoteTerms load_terms(const std::string& file, std::ostream& err) {
    auto result = parse_term_sheet(read_file(file));
    for (const auto& d : result.diagnostics) err << file << ": " << to_string(d) << '\n';
    if (!result.ok()) throw DomainError("term sheet '" + file + "' is invalid");
    return *result.terms;
}

CouponLadder ladder_for(const RunConfig& config, std::ostream& err) {
    if (config.terms_path.empty()) return CouponLadder::from_terms(reference_note_terms());
    return CouponLadder::from_terms(load_terms(config.terms_path, err));
}

template <class Fn>
int guarded(std::ostream& err, Fn&& body) {
    try {
        return body();
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    }
}

std::vector<Interpretation> selected(InterpretationChoice choice) {
    switch (choice) {
    case InterpretationChoice::A: return {Interpretation::A};
    case InterpretationChoice::B: return {Interpretation::B};
    case InterpretationChoice::both: break;
    }
    return {Interpretation::A, Interpretation::B};
}

std::string call_status(const PayoffOutcome& outcome, std::size_t observation) {
    if (!outcome.is_called() || observation < outcome.resolution.observation) return "Securities NOT called";
    if (observation == outcome.resolution.observation) return "Securities CALLED";
    return "note already called";
}

std::string settlement_line(const NoteTerms& terms, const PayoffOutcome& outcome) {
    return "Settlement Amount (per $" + terms.principal.to_string() + "), interpretation " +
           to_string(outcome.interpretation) + ": $" + settlement_amount(outcome).to_string() +
           " (total return of " + percent(outcome.total_return()) + ") [" + to_string(outcome.resolution) +
           ", paid " + format_date(outcome.payment_date) + "]";
}

} // namespace

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto result = parse_term_sheet(read_file(config.terms_path));
        std::size_t warnings = 0;
        for (const auto& d : result.diagnostics) {
            err << config.terms_path << ": " << to_string(d) << '\n';
            warnings += d.is_error() ? 0 : 1;
        }
        if (!result.ok()) return int{kDomainError};
        out << config.terms_path << ": valid (" << result.terms->observations.size() << " observations, " << warnings
            << " warning" << (warnings == 1 ? "" : "s") << ")\n";
        return int{kSuccess};
    });
}

int cmd_replay(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto terms = load_terms(config.terms_path, err);
        auto path = read_prices_csv_file(config.prices_path, terms.index_starting_level);
        auto view = observe(path, terms);
        auto interpretations = selected(config.interpretation);
        std::vector<PayoffOutcome> outcomes;
        for (auto i : interpretations) outcomes.push_back(payoff(i, terms, view));

        out << "Index Starting Level " << format_double(terms.index_starting_level) << ", Trigger Level "
            << format_double(terms.trigger_level()) << '\n';
        out << "Observation Date  Index Ending Level  Index Return  Outcome\n";
        for (std::size_t r = 0; r < terms.observations.size(); ++r) {
            const auto& date = terms.observations[r].date;
            double ret = view.index_return[r];
            double close = terms.index_starting_level * (1.0 + ret);
            std::string outcome = ret >= 0.0 ? "At or Above Index Starting Level" : "Below Index Starting Level";
            outcome += ret < terms.breach_threshold() ? " and Below Trigger Level" : " and Above Trigger Level";
            std::string status;
            for (const auto& o : outcomes) {
                if (!status.empty()) status += ", ";
                status += (outcomes.size() > 1 ? to_string(o.interpretation) + ": " : std::string()) +
                          call_status(o, r + 1);
            }
            char row[96];
            std::snprintf(row, sizeof row, "%-16s  %18.2f  %12s  ", format_date(date).c_str(), close,
                          percent(ret).c_str());
            out << row << outcome << "; " << status << '\n';
        }
        auto breach = breach_date(path, terms);
        out << "First close below Trigger Level: " << (breach ? format_date(*breach) : std::string("none")) << '\n';
        for (const auto& o : outcomes) out << settlement_line(terms, o) << '\n';
        if (outcomes.size() == 2) {
            out << "Difference B - A: $" << (settlement_amount(outcomes[1]) - settlement_amount(outcomes[0])).to_string()
                << '\n';
        }
        return int{kSuccess};
    });
}

int cmd_price(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto ladder = ladder_for(config, err);
        if (config.mode == "iid") {
            if (!config.b1 || !config.b2) throw DomainError("price --mode iid needs --b1 and --b2");
            ScenarioParams params{config.p, *config.b1, *config.b2};
            out << "expected net payment (iid, p=" << format_double(params.p) << ", B1=" << format_double(params.b1)
                << ", B2=" << format_double(params.b2) << "): " << fixed(expected_net_payment_iid(params, ladder), 6)
                << '\n';
            if (config.extrema) {
                auto e = find_extrema(IidCurve{params.b1, params.b2}, ladder, config.resolution);
                out << "max " << fixed(e.max_value, 6) << " at p=" << fixed(e.argmax_p, 6) << '\n';
                out << "min " << fixed(e.min_value, 6) << " at p=" << fixed(e.argmin_p, 6) << '\n';
            }
        } else if (config.mode == "bound") {
            if (!config.tau) throw DomainError("price --mode bound needs --tau");
            TauParams params{config.p, *config.tau};
            if (params.p + params.tau > 1.0 + 1e-12) {
                err << "warning: p + tau = " << format_double(params.p + params.tau)
                    << " exceeds 1; no distribution has these parameters\n";
            }
            out << "expected net payment upper bound (p=" << format_double(params.p)
                << ", tau=" << format_double(params.tau)
                << "): " << fixed(expected_net_payment_upper_bound(params, ladder), 6) << '\n';
            if (config.extrema) {
                auto e = find_extrema(BoundCurve{params.tau}, ladder, config.resolution);
                out << "max " << fixed(e.max_value, 6) << " at p=" << fixed(e.argmax_p, 6) << '\n';
                out << "min " << fixed(e.min_value, 6) << " at p=" << fixed(e.argmin_p, 6) << '\n';
            }
        } else {
            throw DomainError("unknown price mode '" + config.mode + "' (expected iid or bound)");
        }
        return int{kSuccess};
    });
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto ladder = ladder_for(config, err);
        SweepSpec spec;
        spec.p_points = config.points;
        spec.tau_points = config.tau_points;
        if (config.mode == "iid") {
            if (!config.b1 || !config.b2) throw DomainError("sweep --mode iid needs --b1 and --b2");
            spec.mode = SweepMode::iid;
            spec.b1 = *config.b1;
            spec.b2 = *config.b2;
        } else if (config.mode == "bound") {
            if (!config.tau) throw DomainError("sweep --mode bound needs --tau");
            spec.mode = SweepMode::bound;
            spec.tau = *config.tau;
        } else if (config.mode == "surface") {
            spec.mode = SweepMode::surface;
        } else {
            throw DomainError("unknown sweep mode '" + config.mode + "' (expected iid, bound or surface)");
        }
        auto csv = to_csv(sweep(spec, ladder));
        if (config.out_path.empty() || config.out_path == "-") {
            out << csv;
            return int{kSuccess};
        }
        std::ofstream file(config.out_path);
        if (!file) throw IoError("cannot write '" + config.out_path + "'");
        file << csv;
        file.close();
        if (!file) throw IoError("failed writing '" + config.out_path + "'");
        return int{kSuccess};
    });
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!config.seed) throw DomainError("simulate requires --seed");
        auto terms = load_terms(config.terms_path, err);
        auto model = mc::load_model_spec(config.model_path);
        mc::SimulationOptions options;
        options.seed = *config.seed;
        options.n_paths = config.n_paths;
        options.block_size = config.block_size;
        options.workers = config.workers;

        out << "model: " << mc::model_name(model) << '\n';
        out << "paths: " << options.n_paths << ", seed: " << options.seed << ", block size: " << options.block_size
            << '\n';
        std::vector<mc::Estimate> estimates;
        for (auto i : selected(config.interpretation)) {
            auto e = mc::estimate_expected_payment(model, terms, i, options);
            estimates.push_back(e);
            out << "E[net payment], interpretation " << to_string(i) << ": " << fixed(e.mean, 6) << " (se "
                << fixed(e.std_error, 6) << ", 95% CI [" << fixed(e.ci95_low, 6) << ", " << fixed(e.ci95_high, 6)
                << "])\n";
        }
        if (estimates.size() == 2) {
            out << "difference B - A: " << fixed(estimates[1].mean - estimates[0].mean, 6) << '\n';
        }

        auto ladder = CouponLadder::from_terms(terms);
        try {
            auto est = mc::estimate_model_params(model, terms, options);
            out << "estimated parameters: p=" << fixed(est.p, 6) << " (se " << fixed(est.p_se, 6) << "), B1="
                << fixed(est.b1, 6) << " (se " << fixed(est.b1_se, 6) << "), B2=" << fixed(est.b2, 6) << " (se "
                << fixed(est.b2_se, 6) << "), tau=" << fixed(est.tau, 6) << " (se " << fixed(est.tau_se, 6) << ")\n";
            out << "closed form at estimates: iid " << fixed(expected_net_payment_iid({est.p, est.b1, est.b2}, ladder), 6)
                << ", upper bound " << fixed(expected_net_payment_upper_bound({est.p, est.tau}, ladder), 6) << '\n';
        } catch (const DomainError& e) {
            out << "estimated parameters: not available (" << e.what() << ")\n";
        }

        if (auto* lattice = std::get_if<mc::DailyLatticeModel>(&model); lattice && mc::is_enumerable(*lattice, terms)) {
            auto exact = mc::enumerate_exact(*lattice, terms);
            out << "exact (" << exact.paths << " paths): E[net_A]=" << fixed(exact.expected_net_a, 6)
                << ", E[net_B]=" << fixed(exact.expected_net_b, 6) << ", p=" << fixed(exact.p, 6)
                << ", tau=" << fixed(exact.tau, 6);
            if (exact.b1) out << ", B1=" << fixed(*exact.b1, 6);
            if (exact.b2) out << ", B2=" << fixed(*exact.b2, 6);
            out << '\n';
            out << "inequalities:\n" << mc::verify_inequalities(*lattice, terms).to_text();
        } else if (std::holds_alternative<mc::IidSignModel>(model) || std::holds_alternative<mc::MarkovSignModel>(model)) {
            auto exact = mc::exact_sign_model_expectation(model, terms);
            out << "exact scenario-space: E[net_A]=" << fixed(exact.expected_net_a, 6)
                << ", E[net_B]=" << fixed(exact.expected_net_b, 6) << '\n';
        }
        return int{kSuccess};
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Payoff analysis for autocallable reverse convertible notes"};
    app.require_subcommand(1);
    RunConfig config;

    const std::map<std::string, InterpretationChoice> choices{
        {"A", InterpretationChoice::A}, {"B", InterpretationChoice::B}, {"both", InterpretationChoice::both}};

    auto* validate = app.add_subcommand("validate", "Check a term sheet");
    validate->add_option("terms", config.terms_path, "Term sheet file")->required();

    auto* replay = app.add_subcommand("replay", "Settle a note against a historical price file");
    replay->add_option("--terms", config.terms_path, "Term sheet file")->required();
    replay->add_option("--prices", config.prices_path, "date,close CSV")->required();
    replay->add_option("--interpretation", config.interpretation, "A, B or both")
        ->transform(CLI::CheckedTransformer(choices));

    auto* price = app.add_subcommand("price", "Closed-form expected net payment");
    price->add_option("--mode", config.mode, "iid or bound")->required();
    price->add_option("--p", config.p, "Call probability per observation")->required();
    price->add_option("--b1", config.b1, "Minus the mean final return on the loss case");
    price->add_option("--b2", config.b2, "Breach probability given no call");
    price->add_option("--tau", config.tau, "P(final return below the breach threshold)");
    price->add_flag("--extrema", config.extrema, "Also report extrema over p");
    price->add_option("--resolution", config.resolution, "Grid intervals for --extrema");
    price->add_option("--terms", config.terms_path, "Take coupons from this term sheet");

    auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate expected net payments as CSV");
    sweep_cmd->add_option("--mode", config.mode, "iid, bound or surface")->required();
    sweep_cmd->add_option("--points", config.points, "Grid points over p");
    sweep_cmd->add_option("--tau-points", config.tau_points, "Grid points over tau (surface)");
    sweep_cmd->add_option("--b1", config.b1);
    sweep_cmd->add_option("--b2", config.b2);
    sweep_cmd->add_option("--tau", config.tau);
    sweep_cmd->add_option("--out", config.out_path, "Output CSV (default: stdout)");
    sweep_cmd->add_option("--terms", config.terms_path, "Take coupons from this term sheet");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo and exact expectations under a market model");
    simulate->add_option("--model", config.model_path, "Model spec file")->required();
    simulate->add_option("--terms", config.terms_path, "Term sheet file")->required();
    simulate->add_option("--interpretation", config.interpretation, "A, B or both")
        ->transform(CLI::CheckedTransformer(choices));
    simulate->add_option("--n", config.n_paths, "Number of paths");
    simulate->add_option("--seed", config.seed, "Master seed");
    simulate->add_option("--block-size", config.block_size, "Paths per random substream");
    simulate->add_option("--workers", config.workers, "Threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? int{kSuccess} : int{kDomainError};
    }

    if (validate->parsed()) return cmd_validate(config, out, err);
    if (replay->parsed()) return cmd_replay(config, out, err);
    if (price->parsed()) return cmd_price(config, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(config, out, err);
    return cmd_simulate(config, out, err);
}

} // namespace acnote::cli
