// Arovas-A preparation: Trotterized weak unitary plus repeat-until-success
// momentum-parity readout, and the exact oracle state.
#pragma once

#include "scartower/translate.hpp"

namespace scartower {

struct ArovasOracle {
    StateVector state;        // normalized J^dag |AKLT>
    double raw_norm = 0.0;    // || J^dag |AKLT> || with |AKLT> normalized
    double energy = 0.0;      // <H>, recorded rather than assumed
    double residual = 0.0;    // ||(H - energy)|A>||
    double translation = 0.0; // Re <A|T|A>
    double charge = 0.0;      // <Sz_total>
};

// J^dag = sum_j (-1)^j S_j . S_{j+1}, periodic, j = 1..L.
Observable arovas_creation(int L);
ArovasOracle arovas_oracle(int L);

// Second-order split U = e^{i a/2 J_even} e^{i a J_odd} e^{i a/2 J_even}.
// Bond (j, j+1) with even j carries +S.S, odd j carries -S.S; the wrap bond
// (L, 1) goes by the parity of L.
struct TrotterPlan {
    int L = 0;
    double alpha = 0.0;
    std::vector<int> even_bonds, odd_bonds;  // 1-based left site of each bond
    Mat even_half;  // exp(+i a/2 S.S) on one even bond
    Mat odd_full;   // exp(-i a S.S) on one odd bond
};

TrotterPlan make_trotter_plan(int L, double alpha);
StateVector trotter_u(const TrotterPlan& plan, const StateVector& state);

struct RepeatReport {
    int rounds_used = 0;
    bool succeeded = false;
    StateVector final_state;
    double fidelity_to_oracle = 0.0;  // |<A|psi_F>|
    double error = 1.0;               // 1 - fidelity
};

RepeatReport prepare_arovas(int L, double alpha, int max_rounds, Rng& rng);

// Born probability of outcome 1 after one round started from |AKLT>.
double round_success_probability(int L, double alpha);
// Fidelity with |AKLT> of the outcome-0 branch after one round.
double failed_round_fidelity(int L, double alpha);

// Exact statistics of the repeat loop. The failed branch is deterministic, so
// one walk along it gives the first-success distribution without sampling.
struct RoundStatistics {
    int max_rounds = 0;
    double p_first = 0.0;           // success probability of round 1
    double success_within = 0.0;    // P(success by max_rounds)
    double mean_rounds = 0.0;       // runs that never succeed count max_rounds
    double mean_rounds_success = 0.0;
    double mean_error = 0.0;        // over successful runs
    std::vector<double> success_prob;  // per round, given failures so far
    std::vector<double> success_error;
};
RoundStatistics exact_round_statistics(int L, double alpha, int max_rounds);

}  // namespace scartower
