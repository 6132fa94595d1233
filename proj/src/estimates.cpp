#include "parafield/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "parafield/energy.hpp"
#include "parafield/parallel.hpp"
#include "parafield/rng.hpp"

namespace parafield {

double paper_constant_3d() {
    const double a = 1.0 - std::pow(2.0, -1.0 / 5.0);
    const double b = 1.0 - std::pow(2.0, -2.0 / 5.0);
    const double c = 1.0 - std::pow(2.0, -3.0 / 5.0);
    return 4.0 * std::sqrt(1.0 / (a * b) + 1.0 / c);
}

double paper_constant_claimed() { return 6.0; }

double dyadic_round_up(double v) {
    if (!(v > 0)) throw std::domain_error("dyadic_round_up needs a positive value");
    int e;
    const double mant = std::frexp(v, &e);  // v = mant * 2^e, mant in [0.5, 1)
    return mant == 0.5 ? v : std::ldexp(1.0, e);
}

DyadicDecomposition::DyadicDecomposition(Paraboloid domain, std::vector<Term> terms, double scale)
    : domain_(std::move(domain)), terms_(std::move(terms)), scale_(scale) {
    int prev = -1;
    for (const auto& t : terms_) {
        if (t.level <= prev) throw std::invalid_argument("dyadic levels must be strictly increasing");
        if (t.set.size() == 0) throw std::invalid_argument("dyadic level sets must be nonempty");
        if (!(t.set.domain() == domain_)) throw std::invalid_argument("dyadic term over wrong surface");
        prev = t.level;
    }
    // disjointness
    std::vector<uint32_t> all;
    for (const auto& t : terms_) all.insert(all.end(), t.set.indices().begin(), t.set.indices().end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
        throw std::invalid_argument("dyadic level sets must be disjoint");
    }
}

double DyadicDecomposition::weight_sum(const Rational& exponent) const {
    const double e = to_double(exponent);
    double sum = 0;
    for (const auto& t : terms_) {
        sum += std::pow(2.0, -e * t.level) * static_cast<double>(t.set.size());
    }
    return sum;
}

SurfaceFunction DyadicDecomposition::reconstruct() const {
    SurfaceFunction g(domain_);
    for (const auto& t : terms_) {
        const double v = std::ldexp(1.0, -t.level);
        for (uint32_t i : t.set.indices()) g[i] = v;
    }
    return g;
}

Json DyadicDecomposition::to_json() const {
    Json j;
    j["kind"] = "dyadic";
    j["scale"] = scale_;
    Json arr = Json::array();
    for (const auto& t : terms_) {
        arr.push_back(Json{{"level", t.level}, {"mask", t.set.mask_hex()}});
    }
    j["terms"] = arr;
    return j;
}

DyadicDecomposition DyadicDecomposition::from_json(const Paraboloid& domain, const Json& j) {
    std::vector<Term> terms;
    for (const auto& t : j.at("terms")) {
        terms.push_back(Term{t.at("level").get<int>(),
                             ParaboloidSubset::from_mask_hex(domain, t.at("mask").get<std::string>())});
    }
    return {domain, std::move(terms), j.value("scale", 1.0)};
}

DyadicDecomposition dyadic_decompose(const SurfaceFunction& f, const Rational& exponent) {
    if (f.is_zero()) throw std::invalid_argument("cannot decompose the zero function");
    const Paraboloid& P = f.domain();

    // unit counting L^p norm first
    const double e = to_double(exponent);
    double norm_sum = 0;
    for (uint64_t i = 0; i < f.size(); ++i) norm_sum += std::pow(std::abs(f[i]), e);
    const double norm = std::pow(norm_sum, 1.0 / e);

    // round each normalized value up to a power of two and bucket by exponent
    std::vector<std::pair<int, uint32_t>> levels;  // (-log2 of rounded value, point)
    int min_level = std::numeric_limits<int>::max();
    for (uint64_t i = 0; i < f.size(); ++i) {
        const double h = std::abs(f[i]) / norm;
        if (h == 0.0) continue;
        const double rounded = dyadic_round_up(h);
        const int level = static_cast<int>(std::lround(-std::log2(rounded)));
        levels.emplace_back(level, static_cast<uint32_t>(i));
        min_level = std::min(min_level, level);
    }

    // rescale by the largest rounded value: shift levels so the top is j = 0
    std::sort(levels.begin(), levels.end());
    std::vector<DyadicDecomposition::Term> terms;
    size_t i = 0;
    while (i < levels.size()) {
        const int level = levels[i].first;
        std::vector<uint32_t> members;
        while (i < levels.size() && levels[i].first == level) members.push_back(levels[i++].second);
        terms.push_back({level - min_level, ParaboloidSubset(P, std::move(members))});
    }
    const double scale = norm * std::ldexp(1.0, -min_level);
    return {P, std::move(terms), scale};
}

double restriction_ratio(const SurfaceFunction& f, const ExponentPair& pair) {
    if (f.is_zero()) throw std::invalid_argument("restriction ratio of the zero function");
    const double numer = lq_norm(extension(f), pair.q);
    const double denom = lq_norm(f, pair.p);
    return numer / denom;
}

Strategy parse_strategy(const std::string& name) {
    if (name == "exhaustive_char") return Strategy::exhaustive_char;
    if (name == "random_char") return Strategy::random_char;
    if (name == "random_dyadic") return Strategy::random_dyadic;
    if (name == "local_search") return Strategy::local_search;
    throw std::invalid_argument("unknown strategy: " + name);
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::exhaustive_char: return "exhaustive_char";
        case Strategy::random_char: return "random_char";
        case Strategy::random_dyadic: return "random_dyadic";
        case Strategy::local_search: return "local_search";
    }
    return "unknown";
}

Json SearchResult::to_json() const {
    Json j;
    j["p"] = p;
    j["m"] = m;
    j["n"] = n;
    j["exponent_p"] = exponent_p;
    j["exponent_q"] = exponent_q;
    j["strategy"] = to_string(strategy);
    j["budget"] = budget;
    j["seed"] = seed;
    j["best_ratio"] = best_ratio;
    j["argmax"] = argmax;
    j["evaluations"] = evaluations;
    j["condition_satisfied"] = condition_satisfied;
    j["condition_note"] = condition_note;
    return j;
}

std::vector<ReportRow> SearchResult::rows(const std::string& command) const {
    ReportRow base;
    base.command = command;
    base.p = std::to_string(p);
    base.m = std::to_string(m);
    base.n = std::to_string(n);
    base.exponent_p = exponent_p;
    base.exponent_q = exponent_q;
    base.strategy = to_string(strategy);
    base.seed = std::to_string(seed);
    base.budget = std::to_string(budget);

    std::vector<ReportRow> rows;
    auto push = [&](const std::string& name, const std::string& value, const std::string& verdict = "") {
        ReportRow r = base;
        r.metric_name = name;
        r.metric_value = value;
        r.verdict = verdict;
        rows.push_back(std::move(r));
    };
    push("best_ratio", format_double(best_ratio), "report-only");
    push("evaluations", std::to_string(evaluations));
    push("argmax", argmax.contains("mask") ? argmax["mask"].get<std::string>() : argmax.dump());
    push("condition_satisfied", condition_satisfied ? "true" : "false");
    push("condition_note", condition_note);
    return rows;
}

namespace {

SurfaceFunction random_dyadic_function(const Paraboloid& P, Rng& rng) {
    const int depth = 1 + static_cast<int>(rng.below(6));
    SurfaceFunction g(P);
    bool any = false;
    for (uint64_t i = 0; i < P.size(); ++i) {
        const uint64_t u = rng.below(2 * static_cast<uint64_t>(depth));
        if (u < static_cast<uint64_t>(depth)) {
            g[i] = std::ldexp(1.0, -static_cast<int>(u));
            any = true;
        }
    }
    if (!any) g[0] = 1.0;
    return g;
}

Json dyadic_argmax_json(const SurfaceFunction& g) {
    // level sets of an exact dyadic step function
    std::vector<std::pair<int, uint32_t>> levels;
    for (uint64_t i = 0; i < g.size(); ++i) {
        const double v = g[i].real();
        if (v == 0.0) continue;
        levels.emplace_back(static_cast<int>(std::lround(-std::log2(v))), static_cast<uint32_t>(i));
    }
    std::sort(levels.begin(), levels.end());
    Json terms = Json::array();
    size_t i = 0;
    while (i < levels.size()) {
        const int level = levels[i].first;
        std::vector<uint32_t> members;
        while (i < levels.size() && levels[i].first == level) members.push_back(levels[i++].second);
        ParaboloidSubset s(g.domain(), members);
        terms.push_back(Json{{"level", level}, {"mask", s.mask_hex()}});
    }
    Json j;
    j["kind"] = "dyadic";
    j["terms"] = terms;
    return j;
}

struct Candidate {
    double ratio = -1.0;
    std::vector<uint64_t> tie_key;  // mask words; lowest wins ties
    Json descriptor;

    void consider(double r, const ParaboloidSubset& s, const Json& desc) {
        auto words = s.mask_words();
        if (r > ratio || (r == ratio && compare_masks(words, tie_key) < 0)) {
            ratio = r;
            tie_key = std::move(words);
            descriptor = desc;
        }
    }
};

Json subset_descriptor(const ParaboloidSubset& s) {
    Json j;
    j["kind"] = "subset";
    j["mask"] = s.mask_hex();
    return j;
}

}  // namespace

SearchResult estimate_constant(const FieldPtr& field, int n, const ExponentPair& pair, Strategy strategy,
                               uint64_t budget, uint64_t seed, int threads) {
    const Paraboloid P(field, n);
    SearchResult result;
    result.p = field->characteristic();
    result.m = field->degree();
    result.n = n;
    result.exponent_p = to_string(pair.p);
    result.exponent_q = to_string(pair.q);
    result.strategy = strategy;
    result.budget = budget;
    result.seed = seed;
    const FieldCondition cond = theorem_field_condition(field, n);
    result.condition_satisfied = cond.satisfied;
    result.condition_note = cond.description;

    const Rng master(seed);
    Candidate best;

    auto eval_subset = [&](const ParaboloidSubset& s) {
        return restriction_ratio(SurfaceFunction::indicator(s), pair);
    };

    switch (strategy) {
        case Strategy::exhaustive_char: {
            if (P.size() >= 63 || (1ull << P.size()) - 1 > budget) {
                const std::string need =
                    P.size() >= 63 ? ("2^" + std::to_string(P.size())) : std::to_string((1ull << P.size()) - 1);
                throw SizeCapError("exhaustive search needs budget >= " + need + " evaluations");
            }
            const uint64_t masks = 1ull << P.size();
            std::vector<double> ratios(masks, -1.0);
            parallel_for(masks - 1, threads, [&](uint64_t begin, uint64_t end) {
                for (uint64_t k = begin; k < end; ++k) {
                    const uint64_t mask = k + 1;
                    std::vector<uint32_t> members;
                    for (uint64_t i = 0; i < P.size(); ++i) {
                        if (mask & (1ull << i)) members.push_back(static_cast<uint32_t>(i));
                    }
                    ratios[mask] = eval_subset(ParaboloidSubset(P, members));
                }
            });
            for (uint64_t mask = 1; mask < masks; ++mask) {
                // ascending mask order: ties keep the smallest mask
                if (ratios[mask] > best.ratio) {
                    std::vector<uint32_t> members;
                    for (uint64_t i = 0; i < P.size(); ++i) {
                        if (mask & (1ull << i)) members.push_back(static_cast<uint32_t>(i));
                    }
                    const ParaboloidSubset s(P, members);
                    best.consider(ratios[mask], s, subset_descriptor(s));
                }
            }
            result.evaluations = masks - 1;
            break;
        }
        case Strategy::random_char: {
            std::vector<double> ratios(budget, -1.0);
            parallel_for(budget, threads, [&](uint64_t begin, uint64_t end) {
                for (uint64_t t = begin; t < end; ++t) {
                    Rng rng = master.fork(t);
                    ParaboloidSubset s = ParaboloidSubset::random(P, rng);
                    if (s.size() == 0) s = ParaboloidSubset(P, {0});
                    ratios[t] = eval_subset(s);
                }
            });
            for (uint64_t t = 0; t < budget; ++t) {
                Rng rng = master.fork(t);
                ParaboloidSubset s = ParaboloidSubset::random(P, rng);
                if (s.size() == 0) s = ParaboloidSubset(P, {0});
                best.consider(ratios[t], s, subset_descriptor(s));  // ties: smallest mask
            }
            result.evaluations = budget;
            break;
        }
        case Strategy::random_dyadic: {
            std::vector<double> ratios(budget, -1.0);
            parallel_for(budget, threads, [&](uint64_t begin, uint64_t end) {
                for (uint64_t t = begin; t < end; ++t) {
                    Rng rng = master.fork(t);
                    ratios[t] = restriction_ratio(random_dyadic_function(P, rng), pair);
                }
            });
            double best_ratio = -1.0;
            uint64_t best_t = 0;
            for (uint64_t t = 0; t < budget; ++t) {
                if (ratios[t] > best_ratio) {
                    best_ratio = ratios[t];
                    best_t = t;
                }
            }
            if (budget > 0) {
                Rng rng = master.fork(best_t);
                const SurfaceFunction g = random_dyadic_function(P, rng);
                best.ratio = best_ratio;
                best.descriptor = dyadic_argmax_json(g);
            }
            result.evaluations = budget;
            break;
        }
        case Strategy::local_search: {
            Rng rng = master.fork(0);
            ParaboloidSubset current = ParaboloidSubset::random(P, rng);
            if (current.size() == 0) current = ParaboloidSubset(P, {0});
            uint64_t evals = 0;
            double cur_ratio = eval_subset(current);
            ++evals;
            bool improved = true;
            while (improved && evals < budget) {
                improved = false;
                // additions, then removals, then swaps, each in rank order
                auto try_set = [&](std::vector<uint32_t> members) -> bool {
                    if (evals >= budget) return false;
                    const ParaboloidSubset cand(P, std::move(members));
                    const double r = eval_subset(cand);
                    ++evals;
                    if (r > cur_ratio) {
                        current = cand;
                        cur_ratio = r;
                        return true;
                    }
                    return false;
                };
                for (uint64_t i = 0; i < P.size() && !improved; ++i) {
                    if (current.contains(static_cast<uint32_t>(i))) continue;
                    auto members = current.indices();
                    members.push_back(static_cast<uint32_t>(i));
                    improved = try_set(std::move(members));
                }
                if (!improved && current.size() > 1) {
                    for (size_t k = 0; k < current.indices().size() && !improved; ++k) {
                        auto members = current.indices();
                        members.erase(members.begin() + static_cast<long>(k));
                        improved = try_set(std::move(members));
                    }
                }
                if (!improved) {
                    for (size_t k = 0; k < current.indices().size() && !improved; ++k) {
                        for (uint64_t i = 0; i < P.size() && !improved; ++i) {
                            if (current.contains(static_cast<uint32_t>(i))) continue;
                            auto members = current.indices();
                            members[k] = static_cast<uint32_t>(i);
                            improved = try_set(std::move(members));
                        }
                    }
                }
            }
            best.consider(cur_ratio, current, subset_descriptor(current));
            result.evaluations = evals;
            break;
        }
    }

    result.best_ratio = best.ratio;
    result.argmax = best.descriptor;
    return result;
}

double re_evaluate(const SearchResult& result) {
    const FieldPtr field = make_field(result.p, result.m);
    const Paraboloid P(field, result.n);
    const ExponentPair pair(parse_rational(result.exponent_p), parse_rational(result.exponent_q));
    const std::string kind = result.argmax.value("kind", "");
    if (kind == "subset") {
        const auto s = ParaboloidSubset::from_mask_hex(P, result.argmax.at("mask").get<std::string>());
        return restriction_ratio(SurfaceFunction::indicator(s), pair);
    }
    if (kind == "dyadic") {
        SurfaceFunction g(P);
        for (const auto& t : result.argmax.at("terms")) {
            const auto s = ParaboloidSubset::from_mask_hex(P, t.at("mask").get<std::string>());
            const double v = std::ldexp(1.0, -t.at("level").get<int>());
            for (uint32_t i : s.indices()) g[i] = v;
        }
        return restriction_ratio(g, pair);
    }
    throw std::invalid_argument("argmax descriptor of unknown kind");
}

FieldCondition theorem_field_condition(const FieldPtr& field, int n) {
    FieldCondition out;
    if (n == 3) {
        const bool nonsquare = !field->is_square(field->from_int(-1));
        out.satisfied = nonsquare;
        out.description = nonsquare ? "-1 non-square = true" : "condition violated: -1 is a square";
        return out;
    }
    if (n == 2) {
        out.satisfied = true;
        out.description = "n = 2, no field condition";
        return out;
    }
    std::string note;
    out.satisfied = higher_dim_conditions(field, n, &note);
    out.description = out.satisfied ? note : "condition violated: " + note;
    return out;
}

std::vector<SearchResult> scan_fields(const std::vector<uint32_t>& primes, int n, const ExponentPair& pair,
                                      Strategy strategy, uint64_t budget, uint64_t seed, int threads) {
    std::vector<SearchResult> out;
    out.reserve(primes.size());
    const Rng master(seed);
    for (size_t k = 0; k < primes.size(); ++k) {
        const FieldPtr field = make_field(primes[k]);
        // per-field seed derivation keeps rows independent of list order
        const uint64_t field_seed = master.fork(primes[k]).next();
        out.push_back(estimate_constant(field, n, pair, strategy, budget, field_seed, threads));
    }
    return out;
}

}  // namespace parafield
