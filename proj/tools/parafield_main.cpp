// Command-line front end: verification runs, constant searches, and
// machine-readable CSV/JSON reports.
//
// Exit codes: 0 all assertions pass, 1 an asserted inequality failed
// (witness included in the report), 2 usage or configuration error.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "parafield/energy.hpp"
#include "parafield/estimates.hpp"
#include "parafield/fourier.hpp"
#include "parafield/geometry.hpp"
#include "parafield/parallel.hpp"
#include "parafield/report.hpp"
#include "parafield/rng.hpp"

using namespace parafield;

namespace {

struct Options {
    uint32_t p = 3;
    uint32_t m = 1;
    int n = 3;
    std::string pair_text = "8/5,4";
    std::string strategy = "random_char";
    std::string mode = "random";
    uint64_t budget = 10000;
    uint64_t seed = 0;
    uint64_t trials = 0;
    int threads = 0;
    std::string primes_text = "3,7,11";
    std::string output;
    std::string format = "csv";
    std::string check;
    std::string replay;
};

ReportRow base_row(const std::string& command, const Options& opt, bool with_pair, bool with_search) {
    ReportRow r;
    r.command = command;
    r.p = std::to_string(opt.p);
    r.m = std::to_string(opt.m);
    r.n = std::to_string(opt.n);
    if (with_pair) {
        const auto pair = ExponentPair::parse(opt.pair_text);
        r.exponent_p = to_string(pair.p);
        r.exponent_q = to_string(pair.q);
    }
    if (with_search) {
        r.strategy = opt.strategy;
        r.budget = std::to_string(opt.budget);
    }
    r.seed = std::to_string(opt.seed);
    return r;
}

void push_metric(std::vector<ReportRow>& rows, const ReportRow& base, const std::string& name,
                 const std::string& value, const std::string& verdict = "") {
    ReportRow r = base;
    r.metric_name = name;
    r.metric_value = value;
    r.verdict = verdict;
    rows.push_back(std::move(r));
}

// Writes the report and returns the process exit code.
int emit(const Options& opt, const std::string& command, const std::vector<ReportRow>& rows,
         const Json& witness, bool failed) {
    const std::string text = render_report(opt.format, command, rows, witness);
    if (opt.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opt.output, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot open output file: " + opt.output);
        out << text;
        std::cout << "verdict=" << (failed ? "fail" : "pass") << " rows=" << rows.size()
                  << " output=" << opt.output << "\n";
    }
    return failed ? 1 : 0;
}

std::vector<uint32_t> parse_primes(const std::string& text) {
    std::vector<uint32_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(static_cast<uint32_t>(std::stoul(item)));
    }
    if (out.empty()) throw std::invalid_argument("no primes given");
    return out;
}

void append_lemma_report(std::vector<ReportRow>& rows, const ReportRow& base, const LemmaReport& rep) {
    for (const auto& [k, v] : rep.instance) push_metric(rows, base, k, v);
    push_metric(rows, base, "worst_ratio", format_double(rep.worst_ratio), to_string(rep.verdict));
}

// ---------------------------------------------------------------------------
// verify subcommand

int verify_fourier_inversion(const Options& opt) {
    auto field = make_field(opt.p, opt.m);
    const uint64_t trials = opt.trials ? opt.trials : 100;
    const Rng master(opt.seed);
    double worst = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        Rng rng = master.fork(t);
        const auto f = SpaceFunction::random(field, opt.n, rng);
        const auto round = fourier_inverse(fourier_forward(f));
        double diff = 0;
        for (uint64_t i = 0; i < f.size(); ++i) diff = std::max(diff, std::abs(round[i] - f[i]));
        worst = std::max(worst, diff / f.max_abs());
    }
    const bool ok = worst <= 1e-9;
    std::vector<ReportRow> rows;
    const ReportRow base = base_row("verify fourier-inversion", opt, false, false);
    push_metric(rows, base, "trials", std::to_string(trials));
    push_metric(rows, base, "max_rel_error", format_double(worst), ok ? "pass" : "fail");
    Json witness;
    if (!ok) {
        witness["check"] = "fourier-inversion";
        witness["field"] = {{"p", opt.p}, {"m", opt.m}};
        witness["n"] = opt.n;
        witness["instance"] = {{"seed", opt.seed}, {"trials", trials}};
        witness["claim"] = {{"metric", "max_rel_error"}, {"op", "<="}, {"value", 1e-9}};
        witness["observed"] = worst;
    }
    return emit(opt, "verify fourier-inversion", rows, witness, !ok);
}

int verify_bilinear_identity(const Options& opt) {
    auto field = make_field(opt.p, opt.m);
    const Paraboloid P(field, opt.n);
    const uint64_t trials = opt.trials ? opt.trials : 50;
    const Rng master(opt.seed);
    double worst = 0;
    Json witness;
    bool failed = false;
    for (uint64_t t = 0; t < trials && !failed; ++t) {
        Rng rng = master.fork(t);
        const auto A = ParaboloidSubset::random(P, rng);
        const auto B = ParaboloidSubset::random(P, rng);
        try {
            worst = std::max(worst, bilinear_l2_detailed(A, B).rel_error);
        } catch (const InternalCheckError&) {
            failed = true;
            witness["check"] = "bilinear-identity";
            witness["field"] = {{"p", opt.p}, {"m", opt.m}};
            witness["n"] = opt.n;
            witness["instance"] = {{"A", A.mask_hex()}, {"B", B.mask_hex()}};
            witness["claim"] = {{"metric", "rel_error"}, {"op", "<="}, {"value", 1e-9}};
            witness["observed"] = 1.0;
        }
    }
    std::vector<ReportRow> rows;
    const ReportRow base = base_row("verify bilinear-identity", opt, false, false);
    push_metric(rows, base, "trials", std::to_string(trials));
    push_metric(rows, base, "max_rel_error", format_double(worst), failed ? "fail" : "pass");
    return emit(opt, "verify bilinear-identity", rows, witness, failed);
}

int verify_lemma1(const Options& opt) {
    auto field = make_field(opt.p, opt.m);
    const uint64_t q = field->order();
    const auto lines = all_lines(field);

    IncidenceInstance full;
    full.field = field;
    for (uint64_t r = 0; r < q * q; ++r) full.point_ranks.push_back(static_cast<uint32_t>(r));
    full.lines = lines;
    const auto full_res = count_incidences(full);

    const uint64_t trials = opt.trials ? opt.trials : 1000;
    const Rng master(opt.seed);
    double worst = full_res.bound > 0 ? static_cast<double>(full_res.count) / full_res.bound : 0.0;
    bool all_hold = full_res.holds;
    Json witness;
    for (uint64_t t = 0; t < trials; ++t) {
        Rng rng = master.fork(t);
        IncidenceInstance inst;
        inst.field = field;
        for (uint64_t r = 0; r < q * q; ++r) {
            if (rng.coin()) inst.point_ranks.push_back(static_cast<uint32_t>(r));
        }
        for (const auto& l : lines) {
            if (rng.coin()) inst.lines.push_back(l);
        }
        const auto res = count_incidences(inst);
        if (res.bound > 0) worst = std::max(worst, static_cast<double>(res.count) / res.bound);
        if (!res.holds && witness.is_null()) {
            all_hold = false;
            witness["check"] = "lemma1";
            witness["field"] = {{"p", opt.p}, {"m", opt.m}};
            witness["instance"] = {{"seed", opt.seed}, {"trial", t}};
            witness["claim"] = {{"metric", "count_over_bound"}, {"op", "<="}, {"value", 1.0}};
            witness["observed"] = static_cast<double>(res.count) / res.bound;
        }
    }

    std::vector<ReportRow> rows;
    const ReportRow base = base_row("verify lemma1", opt, false, false);
    push_metric(rows, base, "full_count", std::to_string(full_res.count));
    push_metric(rows, base, "full_bound", format_double(full_res.bound));
    push_metric(rows, base, "trials", std::to_string(trials));
    push_metric(rows, base, "worst_ratio", format_double(worst), all_hold ? "pass" : "fail");
    return emit(opt, "verify lemma1", rows, witness, !all_hold);
}

int verify_lemma2(const Options& opt) {
    auto field = make_field(opt.p, opt.m);
    if (opt.n != 3) throw std::invalid_argument("the explicit bilinear bound is three-dimensional");
    LemmaReport rep;
    if (opt.mode == "exhaustive") {
        rep = bilinear_bound_exhaustive(field, opt.threads);
    } else if (opt.mode == "random") {
        rep = bilinear_bound_random(field, opt.trials ? opt.trials : 10000, opt.seed, opt.threads);
    } else {
        throw std::invalid_argument("mode must be exhaustive or random");
    }
    std::vector<ReportRow> rows;
    const ReportRow base = base_row("verify lemma2", opt, false, false);
    append_lemma_report(rows, base, rep);
    return emit(opt, "verify lemma2", rows, rep.witness, rep.failed());
}

int verify_lemma3(const Options& opt) {
    auto field = make_field(opt.p, opt.m);
    if (opt.n < 4) throw std::invalid_argument("the higher-dimensional energy form needs n >= 4");
    const Paraboloid P(field, opt.n);
    const uint64_t trials = opt.trials ? opt.trials : 10000;
    const Rng master(opt.seed);

    std::vector<double> ratios(trials, 0.0);
    parallel_for(trials, opt.threads, [&](uint64_t begin, uint64_t end) {
        for (uint64_t t = begin; t < end; ++t) {
            Rng rng = master.fork(t);
            const auto A = ParaboloidSubset::random(P, rng);
            const auto B = ParaboloidSubset::random(P, rng);
            ratios[t] = higher_dim_energy_ratio(A, B).ratio;
        }
    });
    double sup = 0;
    for (double r : ratios) sup = std::max(sup, r);

    std::string note;
    const bool cond = higher_dim_conditions(field, opt.n, &note);
    std::vector<ReportRow> rows;
    const ReportRow base = base_row("verify lemma3", opt, false, false);
    push_metric(rows, base, "trials", std::to_string(trials));
    push_metric(rows, base, "condition_satisfied", cond ? "true" : "false");
    push_metric(rows, base, "condition_note", note);
    push_metric(rows, base, "sup_ratio", format_double(sup), "report-only");
    return emit(opt, "verify lemma3", rows, Json(), false);
}

int verify_claim(const Options& opt) {
    auto field = make_field(opt.p, opt.m);
    const Paraboloid P(field, opt.n);
    const uint64_t trials = opt.trials ? opt.trials : 20;
    const Rng master(opt.seed);
    uint64_t max_diff = 0;
    Json witness;
    for (uint64_t t = 0; t < trials; ++t) {
        Rng rng = master.fork(t);
        const auto A = ParaboloidSubset::random(P, rng);
        const auto B = ParaboloidSubset::random(P, rng);
        for (uint64_t i = 0; i < P.size(); ++i) {
            const auto counts = galilean_difference_counts(A, B, P.point(i));
            const uint64_t diff =
                counts.lhs > counts.rhs ? counts.lhs - counts.rhs : counts.rhs - counts.lhs;
            if (diff > 0 && witness.is_null()) {
                witness["check"] = "claim";
                witness["field"] = {{"p", opt.p}, {"m", opt.m}};
                witness["n"] = opt.n;
                witness["instance"] = {{"A", A.mask_hex()}, {"B", B.mask_hex()}, {"b", i}};
                witness["claim"] = {{"metric", "abs_diff"}, {"op", "=="}, {"value", 0.0}};
                witness["observed"] = static_cast<double>(diff);
            }
            max_diff = std::max(max_diff, diff);
        }
    }
    const bool ok = max_diff == 0;
    std::vector<ReportRow> rows;
    const ReportRow base = base_row("verify claim", opt, false, false);
    push_metric(rows, base, "trials", std::to_string(trials));
    push_metric(rows, base, "base_points", std::to_string(P.size()));
    push_metric(rows, base, "max_abs_diff", std::to_string(max_diff), ok ? "pass" : "fail");
    return emit(opt, "verify claim", rows, witness, !ok);
}

int verify_lines_distinct(const Options& opt) {
    const auto rep = lines_distinct_check(make_field(opt.p, opt.m));
    std::vector<ReportRow> rows;
    const ReportRow base = base_row("verify lines-distinct", opt, false, false);
    append_lemma_report(rows, base, rep);
    return emit(opt, "verify lines-distinct", rows, rep.witness, rep.failed());
}

int verify_minus_d(const Options& opt) {
    const auto rep = minus_d_check(make_field(opt.p, opt.m), opt.n);
    std::vector<ReportRow> rows;
    const ReportRow base = base_row("verify minus-d", opt, false, false);
    append_lemma_report(rows, base, rep);
    return emit(opt, "verify minus-d", rows, rep.witness, rep.failed());
}

int verify_dyadic_sandwich(const Options& opt) {
    auto field = make_field(opt.p, opt.m);
    const Paraboloid P(field, opt.n);
    const auto pair = ExponentPair::parse(opt.pair_text);
    const uint64_t trials = opt.trials ? opt.trials : 100;
    const Rng master(opt.seed);
    double worst = 0;  // max pointwise violation of either side
    for (uint64_t t = 0; t < trials; ++t) {
        Rng rng = master.fork(t);
        const auto f = SurfaceFunction::random(P, rng);
        if (f.is_zero()) continue;
        const auto d = dyadic_decompose(f, pair.p);
        const auto g = d.reconstruct();
        for (uint64_t i = 0; i < f.size(); ++i) {
            const double h = std::abs(f[i]) / d.scale();
            const double gv = g[i].real();
            if (h == 0.0) continue;
            worst = std::max(worst, h - gv);        // h must stay <= g
            worst = std::max(worst, gv - 2.0 * h);  // g must stay <= 2h
        }
    }
    const bool ok = worst <= 1e-12;
    std::vector<ReportRow> rows;
    const ReportRow base = base_row("verify dyadic-sandwich", opt, true, false);
    push_metric(rows, base, "trials", std::to_string(trials));
    push_metric(rows, base, "max_violation", format_double(worst), ok ? "pass" : "fail");
    Json witness;
    if (!ok) {
        witness["check"] = "dyadic-sandwich";
        witness["field"] = {{"p", opt.p}, {"m", opt.m}};
        witness["n"] = opt.n;
        witness["instance"] = {{"seed", opt.seed}, {"trials", trials}};
        witness["claim"] = {{"metric", "max_violation"}, {"op", "<="}, {"value", 0.0}};
        witness["observed"] = worst;
    }
    return emit(opt, "verify dyadic-sandwich", rows, witness, !ok);
}

// ---------------------------------------------------------------------------
// replay

double replay_metric(const Json& w) {
    const std::string check = w.at("check").get<std::string>();
    const uint32_t p = w.at("field").at("p").get<uint32_t>();
    const uint32_t m = w.at("field").at("m").get<uint32_t>();
    auto field = make_field(p, m);
    const int n = w.value("n", 3);

    if (check == "lemma2") {
        const Paraboloid P(field, 3);
        const auto A = ParaboloidSubset::from_mask_hex(P, w.at("instance").at("A").get<std::string>());
        const auto B = ParaboloidSubset::from_mask_hex(P, w.at("instance").at("B").get<std::string>());
        return bilinear_bound_check(A, B).worst_ratio;
    }
    if (check == "claim") {
        const Paraboloid P(field, n);
        const auto A = ParaboloidSubset::from_mask_hex(P, w.at("instance").at("A").get<std::string>());
        const auto B = ParaboloidSubset::from_mask_hex(P, w.at("instance").at("B").get<std::string>());
        const auto counts =
            galilean_difference_counts(A, B, P.point(w.at("instance").at("b").get<uint64_t>()));
        return counts.lhs > counts.rhs ? static_cast<double>(counts.lhs - counts.rhs)
                                       : static_cast<double>(counts.rhs - counts.lhs);
    }
    if (check == "lines-distinct") {
        const FVector y = vector_from_rank(field, 2, w.at("instance").at("y").get<uint64_t>());
        const FVector y2 = vector_from_rank(field, 2, w.at("instance").at("y_prime").get<uint64_t>());
        return line_of(y).point_ranks() == line_of(y2).point_ranks() ? 1.0 : 0.0;
    }
    if (check == "minus-d") {
        const Paraboloid P(field, n);
        const auto d = P.point(w.at("instance").at("d").get<uint64_t>());
        return on_paraboloid(neg(d.as_vector())) ? 1.0 : 0.0;
    }
    if (check == "bilinear-identity") {
        const Paraboloid P(field, n);
        const auto A = ParaboloidSubset::from_mask_hex(P, w.at("instance").at("A").get<std::string>());
        const auto B = ParaboloidSubset::from_mask_hex(P, w.at("instance").at("B").get<std::string>());
        try {
            return bilinear_l2_detailed(A, B).rel_error;
        } catch (const InternalCheckError&) {
            return 1.0;
        }
    }
    throw std::invalid_argument("cannot replay check: " + check);
}

int run_replay(const Options& opt) {
    std::ifstream in(opt.replay);
    if (!in) throw std::invalid_argument("cannot open witness file: " + opt.replay);
    Json w = Json::parse(in);

    const double value = replay_metric(w);
    const Json claim = w.at("claim");
    const std::string op = claim.at("op").get<std::string>();
    const double claimed = claim.at("value").get<double>();
    bool violated;
    if (op == "<=") violated = value > claimed + 1e-9;
    else if (op == ">=") violated = value < claimed - 1e-9;
    else if (op == "==") violated = std::abs(value - claimed) > 1e-9;
    else throw std::invalid_argument("unknown claim op: " + op);

    std::vector<ReportRow> rows;
    ReportRow base;
    base.command = "verify --replay";
    base.p = std::to_string(w.at("field").at("p").get<uint32_t>());
    base.m = std::to_string(w.at("field").at("m").get<uint32_t>());
    base.n = std::to_string(w.value("n", 3));
    base.seed = "0";
    push_metric(rows, base, "check", w.at("check").get<std::string>());
    push_metric(rows, base, claim.at("metric").get<std::string>(), format_double(value));
    push_metric(rows, base, "reproduced", violated ? "true" : "false", violated ? "fail" : "pass");
    return emit(opt, "verify --replay", rows, w, violated);
}

int run_verify(const Options& opt) {
    if (!opt.replay.empty()) return run_replay(opt);
    if (opt.check == "fourier-inversion") return verify_fourier_inversion(opt);
    if (opt.check == "bilinear-identity") return verify_bilinear_identity(opt);
    if (opt.check == "lemma1") return verify_lemma1(opt);
    if (opt.check == "lemma2") return verify_lemma2(opt);
    if (opt.check == "lemma3") return verify_lemma3(opt);
    if (opt.check == "claim") return verify_claim(opt);
    if (opt.check == "lines-distinct") return verify_lines_distinct(opt);
    if (opt.check == "minus-d") return verify_minus_d(opt);
    if (opt.check == "dyadic-sandwich") return verify_dyadic_sandwich(opt);
    throw std::invalid_argument("unknown check: " + opt.check);
}

// ---------------------------------------------------------------------------
// remaining subcommands

int run_field_info(const Options& opt) {
    auto field = make_field(opt.p, opt.m);
    std::vector<ReportRow> rows;
    const ReportRow base = base_row("field-info", opt, false, false);
    push_metric(rows, base, "order", std::to_string(field->order()));
    push_metric(rows, base, "characteristic", std::to_string(field->characteristic()));
    push_metric(rows, base, "degree", std::to_string(field->degree()));
    push_metric(rows, base, "modulus", field->modulus_string());
    push_metric(rows, base, "minus_one_square",
                field->is_square(field->from_int(-1)) ? "true" : "false");
    Complex sum(0, 0);
    for (uint64_t i = 0; i < field->order(); ++i) sum += field->character(field->element(i));
    push_metric(rows, base, "character_sum_abs", format_double(std::abs(sum)));
    push_metric(rows, base, "trace_of_one", std::to_string(field->trace(field->one())));
    return emit(opt, "field-info", rows, Json(), false);
}

int run_paper_constant(const Options& opt) {
    const double formula = paper_constant_3d();
    const double claimed = paper_constant_claimed();
    std::vector<ReportRow> rows;
    ReportRow base;
    base.command = "paper-constant";
    base.seed = std::to_string(opt.seed);
    push_metric(rows, base, "formula_value", format_double(formula), "report-only");
    push_metric(rows, base, "claimed_bound", format_double(claimed), "report-only");
    push_metric(rows, base, "claimed_bound_satisfied", formula <= claimed ? "true" : "false",
                "report-only");
    push_metric(rows, base, "inner_term", format_double(1.0 / (1.0 - std::pow(2.0, -0.6))));
    push_metric(rows, base, "half_constant", format_double(formula / 2.0));
    if (formula > claimed) {
        std::cerr << "note: the formula evaluates to " << format_double(formula)
                  << ", above the asserted threshold " << format_double(claimed)
                  << "; both values are reported.\n";
    }
    return emit(opt, "paper-constant", rows, Json(), false);
}

int run_energy(const Options& opt) {
    auto field = make_field(opt.p, opt.m);
    const Paraboloid P(field, opt.n);
    const uint64_t trials = opt.trials ? opt.trials : 10;
    const Rng master(opt.seed);
    std::vector<ReportRow> rows;
    const ReportRow base = base_row("energy", opt, false, false);
    bool all_ok = true;
    double worst = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        Rng rng = master.fork(t);
        const auto A = ParaboloidSubset::random(P, rng);
        const auto B = ParaboloidSubset::random(P, rng);
        const uint64_t e = additive_energy(A, B);
        const uint64_t trivial =
            std::min(A.size() * A.size() * B.size(), A.size() * B.size() * B.size());
        push_metric(rows, base, "lambda_" + std::to_string(t), std::to_string(e));
        const double ratio = trivial == 0 ? 0.0 : static_cast<double>(e) / static_cast<double>(trivial);
        worst = std::max(worst, ratio);
        if (e > trivial) all_ok = false;
    }
    push_metric(rows, base, "trials", std::to_string(trials));
    push_metric(rows, base, "worst_ratio_vs_trivial", format_double(worst), all_ok ? "pass" : "fail");
    return emit(opt, "energy", rows, Json(), !all_ok);
}

int run_m_quantity(const Options& opt) {
    auto field = make_field(opt.p, opt.m);
    if (opt.n < 4) throw std::invalid_argument("M(a) needs dimension >= 4");
    const Paraboloid P(field, opt.n);
    const auto B = ParaboloidSubset::full(P);
    const uint64_t q = field->order();
    const double bsize = static_cast<double>(B.size());

    const bool even = opt.n % 2 == 0;
    const double bound =
        even ? std::pow(q, (opt.n + 2) / 2.0) * bsize * bsize + std::pow(q, opt.n) * bsize
             : std::pow(q, static_cast<double>(opt.n)) * bsize +
                   std::pow(q, (opt.n + 1) / 2.0) * bsize * bsize;

    const uint64_t bases = P.size();
    std::vector<double> direct(bases), counted(bases);
    parallel_for(bases, opt.threads, [&](uint64_t begin, uint64_t end) {
        for (uint64_t r = begin; r < end; ++r) {
            const FVector a = vector_from_rank(field, opt.n - 1, r);
            direct[r] = m_quantity(a, B);
            counted[r] = m_quantity_counting(a, B);
        }
    });

    double sup = 0, route_diff = 0;
    uint64_t argmax = 0;
    for (uint64_t r = 0; r < bases; ++r) {
        if (direct[r] > sup) {
            sup = direct[r];
            argmax = r;
        }
        const double denom = std::max(std::abs(direct[r]), std::abs(counted[r]));
        if (denom > 0) route_diff = std::max(route_diff, std::abs(direct[r] - counted[r]) / denom);
    }
    const bool routes_ok = route_diff <= 1e-9;

    std::vector<ReportRow> rows;
    const ReportRow base = base_row("m-quantity", opt, false, false);
    std::string note;
    higher_dim_conditions(field, opt.n, &note);
    push_metric(rows, base, "condition_note", note);
    push_metric(rows, base, "bound_form", even ? "even" : "odd");
    push_metric(rows, base, "base_points", std::to_string(bases));
    for (uint64_t r = 0; r < bases; ++r) {
        push_metric(rows, base, "m_value_" + std::to_string(r), format_double(direct[r]));
    }
    push_metric(rows, base, "sup_m", format_double(sup), "report-only");
    push_metric(rows, base, "argmax_base", std::to_string(argmax));
    push_metric(rows, base, "sup_ratio", format_double(sup / bound), "report-only");
    push_metric(rows, base, "route_max_rel_diff", format_double(route_diff),
                routes_ok ? "pass" : "fail");
    Json witness;
    if (!routes_ok) {
        witness["check"] = "m-quantity";
        witness["field"] = {{"p", opt.p}, {"m", opt.m}};
        witness["n"] = opt.n;
        witness["instance"] = {{"B", "full"}};
        witness["claim"] = {{"metric", "route_max_rel_diff"}, {"op", "<="}, {"value", 1e-9}};
        witness["observed"] = route_diff;
    }
    return emit(opt, "m-quantity", rows, witness, !routes_ok);
}

int run_estimate(const Options& opt) {
    auto field = make_field(opt.p, opt.m);
    const auto pair = ExponentPair::parse(opt.pair_text);
    const auto result = estimate_constant(field, opt.n, pair, parse_strategy(opt.strategy), opt.budget,
                                          opt.seed, opt.threads);
    std::vector<ReportRow> rows = result.rows("estimate-constant");

    bool failed = false;
    Json witness;
    const bool theorem_applies = opt.n == 3 && pair.p == Rational(8, 5) && pair.q == Rational(4) &&
                                 result.condition_satisfied;
    if (theorem_applies) {
        const double cap = paper_constant_3d();
        const bool ok = result.best_ratio <= cap + 1e-9;
        ReportRow base = base_row("estimate-constant", opt, true, true);
        push_metric(rows, base, "explicit_constant", format_double(cap));
        push_metric(rows, base, "within_explicit_constant", ok ? "true" : "false",
                    ok ? "pass" : "fail");
        if (!ok) {
            failed = true;
            witness["check"] = "estimate-constant";
            witness["field"] = {{"p", opt.p}, {"m", opt.m}};
            witness["n"] = opt.n;
            witness["instance"] = result.argmax;
            witness["claim"] = {{"metric", "best_ratio"}, {"op", "<="}, {"value", cap}};
            witness["observed"] = result.best_ratio;
        }
    }
    return emit(opt, "estimate-constant", rows, witness, failed);
}

int run_scan_fields(const Options& opt) {
    const auto primes = parse_primes(opt.primes_text);
    const auto pair = ExponentPair::parse(opt.pair_text);
    const auto results = scan_fields(primes, opt.n, pair, parse_strategy(opt.strategy), opt.budget,
                                     opt.seed, opt.threads);
    std::vector<ReportRow> rows;
    for (const auto& r : results) {
        const auto sub = r.rows("scan-fields");
        rows.insert(rows.end(), sub.begin(), sub.end());
    }
    return emit(opt, "scan-fields", rows, Json(), false);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-field paraboloid extension estimates: verifiers and constant search"};
    app.footer("Environment: PARAFIELD_CAP overrides the field-order cap (default 65536).");
    app.require_subcommand(1);

    Options opt;

    auto add_common = [&](CLI::App* cmd, bool field_flags, bool pair_flag, bool search_flags) {
        if (field_flags) {
            cmd->add_option("--p", opt.p, "field characteristic (odd prime)");
            cmd->add_option("--m", opt.m, "extension degree");
            cmd->add_option("--n", opt.n, "ambient dimension");
        }
        if (pair_flag) cmd->add_option("--pair", opt.pair_text, "exponent pair a/b,c/d");
        if (search_flags) {
            cmd->add_option("--strategy", opt.strategy,
                            "exhaustive_char | random_char | random_dyadic | local_search");
            cmd->add_option("--budget", opt.budget, "evaluation budget");
        }
        cmd->add_option("--seed", opt.seed, "deterministic seed (default 0)");
        cmd->add_option("--trials", opt.trials, "trial count (0 = command default)");
        cmd->add_option("--threads", opt.threads, "worker cap (0 = auto)");
        cmd->add_option("--output", opt.output, "report file (default stdout)");
        cmd->add_option("--format", opt.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* field_info = app.add_subcommand("field-info", "field parameters and sanity metrics");
    add_common(field_info, true, false, false);

    auto* paper_constant = app.add_subcommand(
        "paper-constant", "explicit constant of the 3d bound, with the flagged threshold");
    add_common(paper_constant, false, false, false);

    auto* energy = app.add_subcommand("energy", "additive energy of seeded random subset pairs");
    add_common(energy, true, false, false);

    auto* mq = app.add_subcommand("m-quantity", "M(a) table over all base points, two routes");
    add_common(mq, true, false, false);

    auto* verify = app.add_subcommand("verify", "run a named identity or inequality check");
    verify->add_option("check", opt.check,
                       "fourier-inversion | bilinear-identity | lemma1 | lemma2 | lemma3 | claim | "
                       "lines-distinct | minus-d | dyadic-sandwich");
    verify->add_option("--mode", opt.mode, "exhaustive | random (lemma2)");
    verify->add_option("--replay", opt.replay, "witness file to replay");
    add_common(verify, true, true, false);

    auto* estimate =
        app.add_subcommand("estimate-constant", "search a lower bound for the best constant");
    add_common(estimate, true, true, true);

    auto* scan = app.add_subcommand("scan-fields", "estimate across fields, one row per prime");
    scan->add_option("--primes", opt.primes_text, "comma-separated primes");
    add_common(scan, true, true, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (field_info->parsed()) return run_field_info(opt);
        if (paper_constant->parsed()) return run_paper_constant(opt);
        if (energy->parsed()) return run_energy(opt);
        if (mq->parsed()) return run_m_quantity(opt);
        if (verify->parsed()) {
            if (opt.replay.empty() && opt.check.empty()) {
                throw std::invalid_argument("verify needs a check name or --replay");
            }
            return run_verify(opt);
        }
        if (estimate->parsed()) return run_estimate(opt);
        if (scan->parsed()) return run_scan_fields(opt);
        throw std::invalid_argument("no subcommand");
    } catch (const InternalCheckError& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
