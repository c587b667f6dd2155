// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "kdual/adjunction.hpp"
#include "kdual/ez.hpp"
#include "kdual/hochschild.hpp"
#include "kdual/random_category.hpp"
#include "kdual/random_coalgebra.hpp"
#include "kdual/workspace.hpp"
#include "oracles.hpp"
#include "seed.hpp"

using namespace kdual;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

std::vector<std::pair<std::string, std::string>> corpus() {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto& e : fs::directory_iterator(KDUAL_DATA_DIR))
        if (e.path().extension() == ".json") {
            std::ifstream in(e.path());
            std::stringstream ss;
            ss << in.rdbuf();
            out.push_back({e.path().filename().string(), ss.str()});
        }
    std::sort(out.begin(), out.end());
    return out;
}

/// Runs f<K> with the field the document declares.
template <template <typename> class F, typename... Args>
void with_field(FieldTag tag, Args&&... args) {
    switch (tag) {
        case FieldTag::q: F<Q>{}(args...); break;
        case FieldTag::f2: F<F2>{}(args...); break;
        case FieldTag::f3: F<F3>{}(args...); break;
        case FieldTag::f5: F<F5>{}(args...); break;
    }
}

// ---- 1. axiom suites --------------------------------------------------------

struct CorpusCounts {
    std::size_t categories = 0, coalgebras = 0, curved_categories = 0, curved_coalgebras = 0;
};

template <Field K>
struct ValidateCorpusFile {
    void operator()(const std::string& name, const std::string& text, CorpusCounts& n, Outcome& out) const {
        auto ws = parse_workspace<K>(text);
        for (auto& [cn, c] : ws.categories) {
            auto r = validate_category(c);
            out.require(r.ok, name + ": category " + cn + ": " + r.failure);
            ++n.categories;
            n.curved_categories += c.is_curved();
        }
        for (auto& [cn, c] : ws.coalgebras) {
            auto r = validate_coalgebra(c);
            out.require(r.ok, name + ": coalgebra " + cn + ": " + r.failure);
            ++n.coalgebras;
            n.curved_coalgebras += c.is_curved();
        }
    }
};

template <Field K>
void random_axioms(Rng& rng, std::size_t count, Outcome& out, std::size_t& checked) {
    for (std::size_t t = 0; t < count; ++t) {
        auto d = random_dg_category<K>(rng, 4);
        auto h = random_curved_category<K>(rng, 4);
        auto c = random_coalgebra<K>(rng, 4, t % 2 == 1);
        auto r1 = validate_category(d), r2 = validate_category(h), r3 = validate_coalgebra(c);
        out.require(r1.ok, "random dg category: " + r1.failure);
        out.require(r2.ok, "random curved category: " + r2.failure);
        out.require(r3.ok, "random coalgebra: " + r3.failure);
        checked += 3;
    }
}

Outcome axioms() {
    Outcome out;
    CorpusCounts n;
    for (auto& [name, text] : corpus()) with_field<ValidateCorpusFile>(document_field(text), name, text, n, out);
    out.require(n.categories >= 10 && n.coalgebras >= 10 && n.curved_categories >= 1 && n.curved_coalgebras >= 1,
                "corpus too small");
    Rng rng(test_seed());
    std::size_t checked = 0;
    random_axioms<F2>(rng, 70, out, checked);
    random_axioms<F3>(rng, 70, out, checked);
    random_axioms<Q>(rng, 70, out, checked);
    if (out.pass)
        out.detail = "corpus " + std::to_string(n.categories) + " categories (" + std::to_string(n.curved_categories) +
                     " curved), " + std::to_string(n.coalgebras) + " coalgebras (" +
                     std::to_string(n.curved_coalgebras) + " curved); " + std::to_string(checked / 3) +
                     " random instances of each kind";
    return out;
}

// ---- 2. bar and cobar -------------------------------------------------------

template <Field K>
void bar_cobar_suite(Rng& rng, std::size_t count, Outcome& out) {
    for (std::size_t t = 0; t < count; ++t) {
        auto m = BarConstruction<K>(random_dg_category<K>(rng, 4)).materialize(3);
        auto r = validate_coalgebra(m.coalgebra);
        out.require(r.ok, "bar: " + r.failure);
        const bool curved = t % 2 == 1;
        CobarConstruction<K> o(random_coalgebra<K>(rng, 4, curved));
        auto s = o.check_d_squared(4);
        out.require(s.ok, "cobar d²: " + s.failure);
        if (!curved) {
            auto mc = o.materialize(3);
            out.require(mc.honest, "cobar truncation not a dg ideal");
            auto v = validate_category(mc.category);
            out.require(v.ok, "cobar: " + v.failure);
        }
    }
}

Outcome bar_cobar() {
    Outcome out;
    Rng rng(test_seed() + 1);
    bar_cobar_suite<F2>(rng, 70, out);
    bar_cobar_suite<F3>(rng, 70, out);
    bar_cobar_suite<Q>(rng, 70, out);
    if (out.pass) out.detail = "210 bars (weight <= 3) and 210 cobars (d² to length 4)";
    return out;
}

// ---- 3. Koszul adjunction ---------------------------------------------------

Outcome adjunction() {
    Outcome out;
    Rng rng(test_seed() + 2);
    std::size_t total = 0, nontrivial = 0;
    for (int t = 0; t < 60; ++t) {
        auto c = random_coalgebra<F2>(rng, 3, t % 3 == 0);
        auto d = random_dg_category<F2>(rng, 3);
        auto r = check_adjunction(c, d);
        out.require(r.ok(), "pair " + std::to_string(t) + ": " + std::to_string(r.functors) + " / " +
                                std::to_string(r.mc_elements) + " / " + std::to_string(r.bar_morphisms) + " " +
                                r.transports.failure);
        ++total;
        nontrivial += r.mc_elements > 1;
    }
    if (out.pass)
        out.detail = std::to_string(total) + " F2 pairs, three counts equal and transports inverse (" +
                     std::to_string(nontrivial) + " with more than one element)";
    return out;
}

// ---- 4. counit --------------------------------------------------------------

Outcome counit() {
    Outcome out;
    auto check = [&](const std::string& name, auto r) {
        out.require(r.functor.ok, name + ": counit is not a functor: " + r.functor.failure);
        out.require(r.match(), name + ": hom homology of ΩBD differs from D");
        out.require(r.nonacyclic_pieces.empty(), name + ": a weight piece above 1 has homology");
    };
    check("k over Q", counit_comparison(ground_category<Q>(), -3, 3));
    check("k over F3", counit_comparison(ground_category<F3>(), -3, 3));
    check("A2 over Q", counit_comparison(a2_category<Q>(), -3, 3));
    check("A2 over F3", counit_comparison(a2_category<F3>(), -3, 3));
    auto dn = counit_comparison(dual_numbers<F3>(), -2, 2, 6);
    check("dual numbers over F3", dn);
    out.require(dn.weight_graded, "dual numbers: expected the weight-graded window");
    if (out.pass)
        out.detail = "k and A2 on degrees -3..3; dual numbers over F3 on degrees -2..2, bar weight <= " +
                     std::to_string(dn.weight_cap);
    return out;
}

// ---- 5. tensor-hom ----------------------------------------------------------

Outcome tensor_hom() {
    Outcome out;
    Rng rng(test_seed() + 4);
    std::size_t done = 0, nonempty = 0;
    for (int t = 0; done < 30 && t < 200; ++t) {
        auto c = random_coalgebra<F2>(rng, 2, t % 4 == 1);
        auto c2 = random_coalgebra<F2>(rng, 2, t % 3 == 2);
        auto d = random_dg_category<F2>(rng, 3, false, 1);
        auto tc = tensor_coalgebras(c, c2);
        BarConstruction<F2> bd(d);
        auto lhs = enumerate_bar_morphisms(tc, bd, bd.materialize(std::max<std::size_t>(1, nilpotency_length(tc))));
        auto ih = internal_hom(c2, d);
        auto rhs = enumerate_bar_morphisms(c, ih.bar, ih.bar.materialize(std::max<std::size_t>(1, nilpotency_length(c))));
        out.require(lhs.size() == rhs.size(), "instance " + std::to_string(t) + ": |Hom(C⊗C', BD)| = " +
                                                  std::to_string(lhs.size()) + ", |Hom(C, uHom(C', BD))| = " +
                                                  std::to_string(rhs.size()));
        ++done;
        nonempty += lhs.size() > 1;
    }
    out.require(done >= 25, "fewer than 25 instances");
    if (out.pass)
        out.detail = std::to_string(done) + " F2 instances, equal cardinalities (" + std::to_string(nonempty) +
                     " with more than one morphism)";
    return out;
}

// ---- 6. Eilenberg-Zilber ----------------------------------------------------

template <Field K>
void ez_pair(const PointedCoalgebra<K>& c, const PointedCoalgebra<K>& e, const std::string& label, int lo, int hi,
             std::size_t cap, bool graded, Outcome& out) {
    auto r = ez_compare(c, e, lo, hi, cap, graded);
    out.require(r.functor.ok, label + ": not a functor: " + r.functor.failure);
    out.require(r.chain_map.ok, label + ": not a chain map: " + r.chain_map.failure);
    out.require(r.shuffles.ok, label + ": shuffle identity: " + r.shuffles.failure);
    out.require(r.dims_equal(), label + ": homology dims differ");
}

Outcome eilenberg_zilber() {
    Outcome out;
    std::size_t uncurved = 0;
    for (auto& [name, text] : corpus()) {
        if (name != "ez_pair_q.json") continue;
        auto ws = parse_workspace<Q>(text);
        auto [lo, hi] = ws.degree_window.value_or(std::pair{-4, 0});
        std::size_t cap = ws.weight_cap.value_or(4);
        for (auto i = ws.coalgebras.begin(); i != ws.coalgebras.end(); ++i)
            for (auto j = std::next(i); j != ws.coalgebras.end(); ++j) {
                if (i->second.is_curved() || j->second.is_curved()) continue;
                ez_pair(i->second, j->second, i->first + " ⊗ " + j->first, lo, hi, cap, false, out);
                ++uncurved;
            }
    }
    std::size_t curved = 0;
    for (auto& [name, text] : corpus()) {
        if (name != "curved_f3.json") continue;
        auto ws = parse_workspace<F3>(text);
        ez_pair(ws.coalgebra("U"), ws.coalgebra("V"), "U ⊗ V (associated graded)", -4, 0, 3, true, out);
        ++curved;
    }
    out.require(uncurved >= 1 && curved == 1, "shipped pairs missing");
    Rng rng(test_seed() + 5);
    for (int t = 0; t < 30; ++t) {
        auto c = random_coalgebra<F3>(rng, 2, t % 2 == 0);
        auto e = random_coalgebra<F3>(rng, 2, t % 3 == 0);
        EzMap<F3> m(c, e);
        auto a = m.check_chain_map(3), b = m.check_functor(3), s = m.check_shuffles();
        out.require(a.ok && b.ok && s.ok, "random pair " + std::to_string(t) + ": " + a.failure + b.failure + s.failure);
    }
    if (out.pass)
        out.detail = std::to_string(uncurved) + " shipped uncurved pairs and 1 curved pair agree; map is a functor and "
                                                "chain map on 30 random pairs";
    return out;
}

// ---- 7. Hochschild ----------------------------------------------------------

std::vector<std::size_t> as_list(const std::map<int, std::size_t>& m) {
    std::vector<std::size_t> out;
    for (auto& [n, d] : m) out.push_back(d);
    return out;
}

struct HhTally {
    std::size_t compared = 0, skipped = 0;
};

template <Field K>
struct HochschildCorpusFile {
    void operator()(const std::string& name, const std::string& text, HhTally& n, Outcome& out) const {
        auto ws = parse_workspace<K>(text);
        auto [lo, hi] = ws.degree_window.value_or(std::pair{0, 4});
        for (auto& [cn, d] : ws.categories) {
            if (d.zero || d.is_curved() || d.num_objects() == 0) continue;
            const std::string label = name + ":" + cn;
            std::map<int, std::size_t> reduced;
            try {
                reduced = hh_cohomology(d, lo, hi).dims;
            } catch (const InexactWindow&) {
                ++n.skipped;
                continue;
            }
            auto unreduced = hh_cohomology(d, lo, hi, HhMode{}, HhNormalization::unreduced).dims;
            out.require(reduced == unreduced, label + ": reduced and unreduced differ");
            auto cmp = hh_vs_mc_homs(d, d, identity_functor(d), identity_functor(d), lo, hi);
            out.require(cmp.equal(), label + ": Hochschild and MC hom homology differ");
            ++n.compared;
        }
    }
};

Outcome hochschild() {
    Outcome out;
    auto oracle = oracle::dual_numbers_hh_by_resolution(4);
    out.require(oracle.resolution_exact, "oracle resolution is not exact");
    auto dn = as_list(hh_cohomology(dual_numbers<F3>(), 0, 4).dims);
    out.require(dn == oracle.dims, "dual numbers over F3 differ from the periodic resolution");
    out.require(dn == std::vector<std::size_t>{2, 1, 1, 1, 1}, "dual numbers over F3 are not (2,1,1,1,1)");
    auto a2 = as_list(hh_cohomology(a2_category<Q>(), 0, 4).dims);
    out.require(a2 == std::vector<std::size_t>{1, 0, 0, 0, 0}, "A2 is not (1,0,0,0,0)");
    HhTally n;
    for (auto& [name, text] : corpus()) with_field<HochschildCorpusFile>(document_field(text), name, text, n, out);
    out.require(n.compared >= 5, "too few shipped categories with an exact window");
    if (out.pass)
        out.detail = "dual numbers (2,1,1,1,1) = resolution oracle, A2 (1,0,0,0,0); " + std::to_string(n.compared) +
                     " shipped categories: reduced = unreduced and HH = MC homs (" + std::to_string(n.skipped) +
                     " with no exact window skipped)";
    return out;
}

// ---- 8. interchange ---------------------------------------------------------

Outcome interchange() {
    Outcome out;
    Rng rng(test_seed() + 3);
    const std::pair<InterchangeCase, const char*> cases[] = {
        {InterchangeCase::counital_outer_uncurved_target, "counital outer, uncurved target"},
        {InterchangeCase::uncurved_inner_and_target, "uncurved inner and target"},
        {InterchangeCase::both_counital, "both counital"}};
    std::string counts;
    for (auto [h, label] : cases) {
        int checked = 0;
        for (int t = 0; checked < 12 && t < 600; ++t) {
            auto c = expand(random_coalgebra<F2>(rng, 2, uniform_int(rng, 0, 1)), uniform_int(rng, 0, 1));
            auto c2 = expand(random_coalgebra<F2>(rng, 2, uniform_int(rng, 0, 1)), uniform_int(rng, 0, 1));
            auto d = uniform_int(rng, 0, 2) == 0 ? random_curved_category<F2>(rng, 2)
                                                  : random_dg_category<F2>(rng, 3, false, 1 + uniform_int(rng, 0, 1));
            if (!interchange_applies(h, c, c2, d)) continue;
            auto r = check_interchange(c, c2, d);
            out.require(r.ok, std::string(label) + ": " + r.failure);
            ++checked;
        }
        out.require(checked >= 10, std::string(label) + ": fewer than 10 instances");
        counts += (counts.empty() ? "" : ", ") + std::to_string(checked) + " " + label;
    }
    if (out.pass) out.detail = "isomorphism of curved categories on " + counts;
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double budget_seconds;
    };
    const std::vector<Criterion> criteria = {
        {"axiom suites", axioms, 30},
        {"bar/cobar well-definedness", bar_cobar, 60},
        {"Koszul adjunction", adjunction, 0},
        {"counit homology", counit, 0},
        {"tensor-hom adjunction", tensor_hom, 0},
        {"Eilenberg-Zilber comparison", eilenberg_zilber, 0},
        {"Hochschild cohomology", hochschild, 60},
        {"interchange", interchange, 0},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0 && secs >= c.budget_seconds) {
            o.pass = false;
            o.detail += " (over the " + std::to_string(int(c.budget_seconds)) + " s budget)";
        }
        failures += !o.pass;
        std::ostringstream t;
        t.precision(2);
        t << std::fixed << secs;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << c.name << ": " << o.detail << " [" << t.str()
                  << " s]" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
