// Matrix product states and operators with exact contraction.
#pragma once

#include "scartower/core.hpp"

namespace scartower {

enum class Boundary { periodic, open };
const char* boundary_name(Boundary b);
Boundary parse_boundary(const std::string& s);

struct MPSTensor {
    int site = 1;          // 1-based chain position
    std::vector<Mat> data;  // one left x right matrix per physical level

    int phys_dim() const { return static_cast<int>(data.size()); }
    int left_dim() const { return data.empty() ? 0 : static_cast<int>(data[0].rows()); }
    int right_dim() const { return data.empty() ? 0 : static_cast<int>(data[0].cols()); }
};

struct MPS {
    std::vector<MPSTensor> tensors;
    Boundary boundary = Boundary::open;
    Vec left, right;  // open boundary vectors

    int length() const { return static_cast<int>(tensors.size()); }
    int max_bond() const;
    std::vector<int> phys_dims() const;
    void validate() const;
};

// Site tensors carry d_out*d_in matrices, index out*d_in + in.
struct MPOTensor {
    int site = 1;
    int d_out = 0, d_in = 0;
    std::vector<Mat> data;

    int left_dim() const { return data.empty() ? 0 : static_cast<int>(data[0].rows()); }
    int right_dim() const { return data.empty() ? 0 : static_cast<int>(data[0].cols()); }
    const Mat& at(int out, int in) const { return data[static_cast<std::size_t>(out * d_in + in)]; }
};

struct MPO {
    std::vector<MPOTensor> tensors;
    Vec left, right;
    cplx scale = 1.0;

    int length() const { return static_cast<int>(tensors.size()); }
    int max_bond() const;
    void validate() const;
};

// Operator on `matrix` acting on consecutive sites first_site .. first_site+m-1
// (0-based). m = 0 encodes a scalar factor matrix(0,0).
struct Gate {
    int first_site = 0;
    int num_sites = 1;
    Mat matrix;
};

StateVector contract_to_statevector(const MPS& mps);

// Ordered product gates[0] * gates[1] * ... (the last gate acts first) as an open MPO.
// Each gate is split exactly by successive SVDs; singular values below 1e-14
// relative are dropped.
MPO mpo_from_gates(int L, int d, const std::vector<Gate>& gates);

MPS apply_mpo(const MPO& mpo, const MPS& mps);
StateVector apply_mpo(const MPO& mpo, const StateVector& state);
Mat mpo_to_dense(const MPO& mpo);

MPS product_mps(const std::vector<Vec>& locals);

// Charge-resolved norm of an MPS for an onsite integer charge.
// level_charge[s] is the charge of local level s; returns log weights
// log <psi|Pi_Q|psi> for Q = qmin, qmin+1, ... (-inf for empty sectors).
struct SectorLogWeights {
    int qmin = 0;
    std::vector<double> log_weight;
};
SectorLogWeights sector_weights_transfer(const MPS& mps, const std::vector<int>& level_charge);

}  // namespace scartower
