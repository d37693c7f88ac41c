#include <catch_amalgamated.hpp>

#include <random>

#include "teleportnet/paper_tables.hpp"
#include "teleportnet/protocol.hpp"

using namespace teleportnet;
using Catch::Approx;

namespace {
const std::vector<InputQubit> kTwoInputs = {
    {{std::sqrt(1.0 / 3.0), 0.0}, {0.0, std::sqrt(2.0 / 3.0)}},
    {{0.6, 0.0}, {0.8, 0.0}}};
}

TEST_CASE("prepare_joint_state") {
    SECTION("N=1 reproduces the single-qubit teleportation branches") {
        const cplx a{0.8, 0.0}, b{0.0, 0.6};
        StateVector joint = prepare_joint_state({{a, b}}, build_product_channel(1));
        REQUIRE(joint.num_qubits() == 3);
        for (BellOutcome o : kAllBellOutcomes) {
            BellProjection r = bell_project(joint, 1, 2, o);
            REQUIRE(r.probability == Approx(0.25).margin(1e-12));
            REQUIRE(r.collapsed);
            cplx e0, e1;
            switch (o) {
                case BellOutcome::PhiPlus:  e0 = a; e1 = b; break;
                case BellOutcome::PhiMinus: e0 = a; e1 = -b; break;
                case BellOutcome::PsiPlus:  e0 = b; e1 = a; break;
                case BellOutcome::PsiMinus: e0 = -b; e1 = a; break;
            }
            REQUIRE(std::abs(r.collapsed->amp(0) - e0) < 1e-12);
            REQUIRE(std::abs(r.collapsed->amp(1) - e1) < 1e-12);
        }
    }

    SECTION("basis inputs give a product with the channel") {
        StateVector joint = prepare_joint_state(
            {{{1, 0}, {0, 0}}, {{1, 0}, {0, 0}}}, build_entangled_channel(2));
        StateVector expected =
            tensor(make_basis_state(2, {0, 0}), build_entangled_channel(2));
        for (std::size_t i = 0; i < joint.dim(); ++i)
            REQUIRE(std::abs(joint.amp(i) - expected.amp(i)) < 1e-14);
    }

    SECTION("N=3 register has 512 amplitudes") {
        StateVector joint = prepare_joint_state(generic_verification_inputs(3),
                                                build_entangled_channel(3));
        REQUIRE(joint.dim() == 512);
    }

    REQUIRE_THROWS_AS(
        prepare_joint_state(kTwoInputs, build_product_channel(3)),
        std::invalid_argument);
}

TEST_CASE("sender measurement bookkeeping") {
    ProtocolState ps(kTwoInputs, build_entangled_channel(2));

    SECTION("all four outcomes for sender 1 have probability 1/4") {
        for (BellOutcome o : kAllBellOutcomes)
            REQUIRE(ps.outcome_probability(1, o) == Approx(0.25).margin(1e-12));
    }

    SECTION("register shrinks and later positions stay correct") {
        ps.measure_sender(1, BellOutcome::PsiPlus);
        REQUIRE(ps.state().num_qubits() == 4);
        // sender 2's pair moved to positions (1, 2)
        REQUIRE(ps.position_of(2) == 1);
        REQUIRE(ps.position_of(2 + 2) == 2);
        ps.measure_sender(2, BellOutcome::PhiMinus);
        REQUIRE(ps.state().num_qubits() == 2);
        REQUIRE(ps.receiver_positions() == std::vector<int>{1, 2});
    }

    SECTION("double measurement is rejected") {
        ps.measure_sender(1, BellOutcome::PhiPlus);
        REQUIRE_THROWS_AS(ps.measure_sender(1, BellOutcome::PhiPlus),
                          std::logic_error);
    }
}

TEST_CASE("receiver_cnot_cascade") {
    SECTION("separates the N=2 chi state into the input product") {
        const cplx a1{0.6, 0.0}, b1{0.8, 0.0};
        const cplx a2{std::sqrt(0.2), 0.0}, b2{0.0, std::sqrt(0.8)};
        // chi(1): a1 a2|00> + a1 b2|01> + b1 a2|11> + b1 b2|10>
        StateVector chi(2, {a1 * a2, a1 * b2, b1 * b2, b1 * a2});
        StateVector out = receiver_cnot_cascade(chi);
        StateVector expected = product_of_inputs({{a1, b1}, {a2, b2}});
        REQUIRE(fidelity_mod_phase(out, expected) == Approx(1.0).margin(1e-12));
    }

    SECTION("separates the N=3 chi state") {
        const std::vector<InputQubit> inputs = generic_verification_inputs(3);
        const cplx a1 = inputs[0].a, b1 = inputs[0].b;
        const cplx a2 = inputs[1].a, b2 = inputs[1].b;
        const cplx a3 = inputs[2].a, b3 = inputs[2].b;
        // chi(1) for the six-qubit channel: the |1>-count of the first two
        // labels flips the last bit.
        StateVector chi(3, {a1 * a2 * a3, a1 * a2 * b3, a1 * b2 * b3, a1 * b2 * a3,
                            b1 * a2 * b3, b1 * a2 * a3, b1 * b2 * a3, b1 * b2 * b3});
        StateVector out = receiver_cnot_cascade(chi);
        REQUIRE(fidelity_mod_phase(out, product_of_inputs(inputs)) ==
                Approx(1.0).margin(1e-12));
    }

    SECTION("N=1 is the identity and the cascade is an involution") {
        StateVector one(1, {cplx{0.6, 0}, cplx{0, 0.8}});
        StateVector same = receiver_cnot_cascade(one);
        REQUIRE(fidelity_mod_phase(one, same) == Approx(1.0));

        std::mt19937_64 rng(23);
        std::vector<InputQubit> inputs = sample_generic_inputs(3, rng);
        StateVector s = product_of_inputs(inputs);
        StateVector twice = receiver_cnot_cascade(receiver_cnot_cascade(s));
        for (std::size_t i = 0; i < s.dim(); ++i)
            REQUIRE(std::abs(twice.amp(i) - s.amp(i)) < 1e-12);
    }
}

TEST_CASE("correction_for is the per-qubit I/Z/X/Y map") {
    REQUIRE(correction_for({BellOutcome::PhiPlus, BellOutcome::PhiPlus}) ==
            PauliString{Pauli::I, Pauli::I});
    REQUIRE(correction_for({BellOutcome::PhiPlus, BellOutcome::PsiMinus}) ==
            PauliString{Pauli::I, Pauli::Y});
    REQUIRE(correction_for({BellOutcome::PsiMinus, BellOutcome::PsiMinus,
                            BellOutcome::PsiMinus}) ==
            PauliString{Pauli::Y, Pauli::Y, Pauli::Y});

    SECTION("changing sender j's outcome changes only entry j") {
        std::mt19937_64 rng(31);
        std::uniform_int_distribution<int> pick(0, 3);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<BellOutcome> outcomes(4);
            for (auto& o : outcomes) o = kAllBellOutcomes[pick(rng)];
            PauliString base = correction_for(outcomes);
            const int j = pick(rng);
            std::vector<BellOutcome> changed = outcomes;
            changed[j] = kAllBellOutcomes[(static_cast<int>(outcomes[j]) + 1) % 4];
            PauliString after = correction_for(changed);
            for (int k = 0; k < 4; ++k)
                if (k != j) REQUIRE(base[k] == after[k]);
            REQUIRE(base[j] != after[j]);
        }
    }
}

TEST_CASE("apply_correction") {
    std::mt19937_64 rng(37);
    StateVector s = product_of_inputs(sample_generic_inputs(2, rng));
    StateVector same = apply_correction(s, {Pauli::I, Pauli::I});
    for (std::size_t i = 0; i < s.dim(); ++i) REQUIRE(same.amp(i) == s.amp(i));

    REQUIRE_THROWS_AS(apply_correction(s, {Pauli::X}), std::invalid_argument);
}

TEST_CASE("run_protocol forced branches") {
    SECTION("(phi+, phi+) needs no correction") {
        Transcript t = run_protocol(
            kTwoInputs, ChannelKind::Entangled,
            OutcomePolicy::force({BellOutcome::PhiPlus, BellOutcome::PhiPlus}));
        REQUIRE(t.correction == PauliString{Pauli::I, Pauli::I});
        REQUIRE(t.fidelity.value() == Approx(1.0).margin(1e-10));
        REQUIRE(t.outcome_probability == Approx(1.0 / 16.0).margin(1e-10));
        REQUIRE(t.cascade_applied);
    }

    SECTION("(phi+, phi+, psi+) needs only sigma_x on the last receiver qubit") {
        Transcript t = run_protocol(
            generic_verification_inputs(3), ChannelKind::Entangled,
            OutcomePolicy::force({BellOutcome::PhiPlus, BellOutcome::PhiPlus,
                                  BellOutcome::PsiPlus}));
        REQUIRE(t.correction == PauliString{Pauli::I, Pauli::I, Pauli::X});
        REQUIRE(t.fidelity.value() == Approx(1.0).margin(1e-10));
    }

    SECTION("all 16 outcome tuples teleport the N=2 inputs perfectly") {
        for (std::size_t idx = 0; idx < 16; ++idx) {
            Transcript t = run_protocol(kTwoInputs, ChannelKind::Entangled,
                                        OutcomePolicy::force(outcome_tuple(2, idx)));
            REQUIRE(t.fidelity.value() == Approx(1.0).margin(1e-10));
            REQUIRE(t.outcome_probability == Approx(1.0 / 16.0).margin(1e-10));
        }
    }

    SECTION("product channel reproduces standard N-fold teleportation") {
        for (std::size_t idx = 0; idx < 16; ++idx) {
            Transcript t = run_protocol(kTwoInputs, ChannelKind::Product,
                                        OutcomePolicy::force(outcome_tuple(2, idx)));
            REQUIRE_FALSE(t.cascade_applied);
            REQUIRE(t.fidelity.value() == Approx(1.0).margin(1e-10));
        }
    }

    REQUIRE_THROWS_AS(
        run_protocol(kTwoInputs, ChannelKind::Entangled,
                     OutcomePolicy::force({BellOutcome::PhiPlus})),
        std::invalid_argument);
}

TEST_CASE("run_protocol seeded runs are deterministic") {
    std::mt19937_64 rng(41);
    const std::vector<InputQubit> inputs = sample_generic_inputs(3, rng);
    Transcript a = run_protocol(inputs, ChannelKind::Entangled,
                                OutcomePolicy::seeded(99));
    Transcript b = run_protocol(inputs, ChannelKind::Entangled,
                                OutcomePolicy::seeded(99));
    REQUIRE(a.outcomes == b.outcomes);
    REQUIRE(a.fidelity.value() == Approx(1.0).margin(1e-10));
}

TEST_CASE("generate_correction_table") {
    SECTION("N=1 rows are I, Z, X, Y") {
        auto table = generate_correction_table(1);
        REQUIRE(table.size() == 4);
        REQUIRE(table[0].correction == PauliString{Pauli::I});
        REQUIRE(table[1].correction == PauliString{Pauli::Z});
        REQUIRE(table[2].correction == PauliString{Pauli::X});
        REQUIRE(table[3].correction == PauliString{Pauli::Y});
        for (const auto& row : table) REQUIRE(row.verified);
    }

    SECTION("N=2 matches the printed table on all 16 rows") {
        auto diff = paper_tables::compare_with_paper(generate_correction_table(2), 2);
        REQUIRE(diff.matches == 16);
        REQUIRE(diff.mismatches.empty());
        REQUIRE(diff.reordered == 0);
    }

    SECTION("N=3 differs from the printed table exactly at the duplicated entries") {
        auto diff = paper_tables::compare_with_paper(generate_correction_table(3), 3);
        REQUIRE(diff.matches == 62);
        REQUIRE(diff.mismatches.size() == 2);
        // The printed table repeats "sz5 sx6" and "sz4 sz5 sx6" where the
        // verified operators end in sy6.
        REQUIRE(diff.mismatches[0].outcomes ==
                std::vector<BellOutcome>{BellOutcome::PhiPlus, BellOutcome::PhiMinus,
                                         BellOutcome::PsiMinus});
        REQUIRE(diff.mismatches[0].generated == "sz5 sy6");
        REQUIRE(diff.mismatches[1].outcomes ==
                std::vector<BellOutcome>{BellOutcome::PhiMinus, BellOutcome::PhiMinus,
                                         BellOutcome::PsiMinus});
        REQUIRE(diff.mismatches[1].generated == "sz4 sz5 sy6");
    }

    SECTION("every emitted row passes its own numerical verification") {
        for (int n : {2, 3})
            for (const auto& row : generate_correction_table(n))
                REQUIRE(row.verified);
    }

    REQUIRE_THROWS_AS(generate_correction_table(7), std::invalid_argument);
}

TEST_CASE("format_correction uses paper qubit numbering") {
    REQUIRE(format_correction({Pauli::I, Pauli::I}) == "I");
    REQUIRE(format_correction({Pauli::I, Pauli::Y}) == "sy4");
    REQUIRE(format_correction({Pauli::Z, Pauli::X, Pauli::Y}) == "sz4 sx5 sy6");
}
