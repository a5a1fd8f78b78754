#include <doctest.h>

#include <set>

#include "qoc/transitions.hpp"

using namespace qoc;

namespace {

DeviceParams two_qubit() {
    DeviceParams p;
    p.n_qubits = 2;
    p.ec = (VectorXd(2) << 140.2, 162.2).finished();
    p.ej = (VectorXd(2) << 10.9, 9.9).finished();
    p.em = (VectorXd(1) << 23.0).finished();
    p.ng0 = (VectorXd(2) << 0.24, 0.26).finished();
    return p;
}

}  // namespace

TEST_CASE("class names") {
    CHECK(to_string(TransitionClass::Working) == "working");
    CHECK(to_string(TransitionClass::AllowedLeakage) == "allowed_leakage");
    CHECK(to_string(TransitionClass::Forbidden) == "forbidden");
}

TEST_CASE("no tunneling means no off-diagonal matrix elements") {
    DeviceParams p = two_qubit();
    p.ej.setZero();
    const TransitionTable table = transition_table(p, p.ng0, {-1, 2});
    for (const Transition& t : table.rows) CHECK(t.element <= 1e-12);
}

TEST_CASE("table covers every eigenstate pair once per channel") {
    const DeviceParams p = two_qubit();
    const ChargeRange range{-1, 2};
    const TransitionTable table = transition_table(p, p.ng0, range);

    const int dim = 16;
    REQUIRE(table.energies_ghz.size() == dim);
    REQUIRE(static_cast<int>(table.dominant_charge.size()) == dim);
    CHECK(static_cast<int>(table.rows.size()) == 2 * (dim * (dim - 1)) / 2);

    // ascending energies, i < f, frequencies consistent with the spectrum
    for (int e = 1; e < dim; ++e)
        CHECK(table.energies_ghz[e] >= table.energies_ghz[e - 1]);
    std::set<std::tuple<int, int, int>> seen;
    for (const Transition& t : table.rows) {
        CHECK(t.i < t.f);
        CHECK(t.freq_ghz ==
              doctest::Approx(table.energies_ghz[t.f] - table.energies_ghz[t.i])
                  .epsilon(1e-12));
        CHECK(t.element >= 0.0);
        seen.insert({t.channel, t.i, t.f});
    }
    CHECK(seen.size() == table.rows.size());  // no duplicates

    // rows arrive sorted by (channel, i, f)
    for (size_t r = 1; r < table.rows.size(); ++r) {
        const auto& a = table.rows[r - 1];
        const auto& b = table.rows[r];
        const auto ka = std::make_tuple(a.channel, a.i, a.f);
        const auto kb = std::make_tuple(b.channel, b.i, b.f);
        CHECK(ka < kb);
    }
}

TEST_CASE("classification follows the dominant charge configurations") {
    // With weak tunneling every eigenstate is dominated by one charge
    // configuration, so the taxonomy is unambiguous: pairs inside {0,1}^2 are
    // working, one-charge excursions are allowed leakage, two-charge jumps
    // are forbidden.
    DeviceParams p = two_qubit();
    p.ej = (VectorXd(2) << 0.5, 0.4).finished();
    const ChargeRange range{-1, 2};
    const TransitionTable table = transition_table(p, p.ng0, range);

    int n_working = 0, n_allowed = 0, n_forbidden = 0;
    for (const Transition& t : table.rows) {
        const int ci = table.dominant_charge[t.i];
        const int cf = table.dominant_charge[t.f];
        REQUIRE(ci >= 0);
        REQUIRE(cf >= 0);
        // unflatten base-4 digits (charge offset from range.lo)
        const int levels = range.levels();
        int worst = 0;
        bool comp = true;
        for (int v = 0, a = ci, b = cf; v < 2; ++v) {
            const int qa = a % levels + range.lo, qb = b % levels + range.lo;
            worst = std::max(worst, std::abs(qa - qb));
            if (qa < 0 || qa > 1 || qb < 0 || qb > 1) comp = false;
            a /= levels;
            b /= levels;
        }
        switch (t.cls) {
            case TransitionClass::Working:
                ++n_working;
                CHECK(comp);
                break;
            case TransitionClass::AllowedLeakage:
                ++n_allowed;
                CHECK(worst <= 1);
                CHECK(!comp);
                break;
            case TransitionClass::Forbidden:
                ++n_forbidden;
                CHECK(worst >= 2);
                break;
        }
    }
    CHECK(n_working == 2 * 6);  // C(4,2) computational pairs per channel
    CHECK(n_allowed > 0);
    CHECK(n_forbidden > 0);
}

TEST_CASE("relabeling the qubits swaps the channel tables") {
    DeviceParams p = two_qubit();
    DeviceParams q = p;  // same device read back to front
    q.ec.reverseInPlace();
    q.ej.reverseInPlace();
    q.ng0.reverseInPlace();

    const TransitionTable ta = transition_table(p, p.ng0, {-1, 2});
    const TransitionTable tb = transition_table(q, q.ng0, {-1, 2});

    // the relabeled device has the same spectrum, and its channel-2 rows are
    // the original channel-1 rows (and vice versa) as multisets
    const auto pick = [](const TransitionTable& t, int channel, bool freq) {
        std::vector<double> out;
        for (const Transition& row : t.rows)
            if (row.channel == channel) out.push_back(freq ? row.freq_ghz : row.element);
        std::sort(out.begin(), out.end());
        return out;
    };
    for (int ch : {0, 1}) {
        const auto ea = pick(ta, ch, false), eb = pick(tb, 1 - ch, false);
        const auto fa = pick(ta, ch, true), fb = pick(tb, 1 - ch, true);
        REQUIRE(ea.size() == eb.size());
        for (size_t i = 0; i < ea.size(); ++i) {
            CHECK(ea[i] == doctest::Approx(eb[i]).epsilon(1e-9));
            CHECK(fa[i] == doctest::Approx(fb[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("spectral overlap weights elements by the drive magnitude") {
    const DeviceParams p = two_qubit();
    const TransitionTable table = transition_table(p, p.ng0, {-1, 2});

    ControlSequence seq;
    seq.n_slices = 50;
    seq.dt = 1.1;
    seq.amplitudes = MatrixXd::Constant(50, 2, 0.05);
    std::vector<Spectrum> spectra = {spectrum(seq, 0), spectrum(seq, 1)};

    const auto scores = spectral_overlap(spectra, table);
    REQUIRE(scores.size() == table.rows.size());
    for (size_t r = 0; r < scores.size(); ++r) {
        const Transition& t = scores[r].transition;
        CHECK(t.i == table.rows[r].i);
        CHECK(t.f == table.rows[r].f);
        const double expect =
            interp_magnitude(spectra[t.channel], std::abs(t.freq_ghz)) * t.element;
        CHECK(scores[r].overlap == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("gate-charge sweeps enumerate the grid row-major and deterministically") {
    const DeviceParams p = two_qubit();
    const ChargeRange range{-1, 2};
    VectorXd ng1(3), ng2(2);
    ng1 << 0.2, 0.4, 0.6;
    ng2 << 0.3, 0.7;

    const auto rows = transition_sweep(p, range, ng1, ng2);
    const auto again = transition_sweep(p, range, ng1, ng2);
    REQUIRE(rows.size() == again.size());
    for (size_t r = 0; r < rows.size(); ++r) {
        CHECK(rows[r].ng1 == again[r].ng1);
        CHECK(rows[r].freq_ghz == again[r].freq_ghz);
        CHECK(rows[r].element == again[r].element);
    }

    const size_t per_node = rows.size() / 6;
    REQUIRE(rows.size() == per_node * 6);
    size_t idx = 0;
    for (double a : {0.2, 0.4, 0.6})
        for (double b : {0.3, 0.7})
            for (size_t k = 0; k < per_node; ++k, ++idx) {
                CHECK(rows[idx].ng1 == a);
                CHECK(rows[idx].ng2 == b);
                CHECK(rows[idx].transition_id == static_cast<int>(k));
            }

    // one slice of the sweep equals a standalone table at that working point
    VectorXd one(1);
    VectorXd total(2);
    total << 0.4, 0.7;
    const TransitionTable direct = transition_table(p, total, range);
    const size_t base = (1 * 2 + 1) * per_node;  // node (0.4, 0.7)
    for (size_t k = 0; k < per_node; ++k) {
        CHECK(rows[base + k].freq_ghz == direct.rows[k].freq_ghz);
        CHECK(rows[base + k].element == direct.rows[k].element);
    }
}
