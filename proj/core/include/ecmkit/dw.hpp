#pragma once

#include <memory>

#include "ecmkit/crs.hpp"
#include "ecmkit/kernel_profile.hpp"
#include "ecmkit/lattice.hpp"
#include "ecmkit/layer_condition.hpp"
#include "ecmkit/machine_model.hpp"
#include "ecmkit/trace.hpp"

namespace ecmkit {

/// Domain-wall stencil: out(n,s) = sum_mu U_mu(n)(1+gamma_mu) psi(n+mu,s)
///                               + U_mu^+(n-mu)(1-gamma_mu) psi(n-mu,s),
/// periodic boundaries, via spin projection to half spinors, two 3x3
/// matrix-vector products per direction and spin reconstruction. RIRI and
/// RRII fields run through layout-specific inner loops that agree
/// elementwise.
FermionField dw_apply(const GaugeField& u, const FermionField& psi, int threads = 1);

/// Explicit real matrix of the operator over 24 * V4 * Ls dimensions, built
/// column by column from unit vectors; refuses more than 1e5 dimensions.
/// Together with a generic SpMV this is the correctness oracle for dw_apply.
CrsMatrix dw_matrix(const GaugeField& u, int threads = 1);

/// Flop accounting per lattice-site update.
constexpr int kDwFlopsNominal = 1320;            // 96 + 8*132 + 168
constexpr int kDwMatvecFlopsPerDirection = 132;  // 2*(9*6 + 6*2)
int dw_flops_executed(Layout layout);            // RIRI pays 96 extra flops

/// Per-core access streams of the vectorized kernel: collapsed 4d loop with
/// the s loop innermost, static contiguous block scheduling, one event per
/// gauge/spinor vector element. `passes` repeats the sweep so steady-state
/// traffic can be isolated by differencing runs.
class DwTraceSource : public TraceSource {
public:
    DwTraceSource(const LatticeGeometry& geom, int cores, int passes = 1);

    int cores() const override { return ncores_; }
    const std::vector<std::string>& tags() const override { return tags_; }
    std::uint64_t address_space_bytes() const override { return top_; }
    std::uint64_t norm_units() const override;
    void reset() override;
    bool next(int core, TraceEvent& ev) override;

private:
    struct Cursor {
        std::int64_t site = 0; // local collapsed index within [begin, end)
        std::int64_t begin = 0, end = 0;
        int s = 0;
        int phase = 0; // 0..15: U/I pairs, 16: O store
        int pass = 0;
    };

    LatticeGeometry geom_;
    int ncores_ = 1;
    int passes_ = 1;
    std::vector<std::string> tags_{"U", "I", "O"};
    std::uint64_t base_u_ = 0, base_i_ = 0, base_o_ = 0, top_ = 0;
    std::uint32_t u_elem_ = 0, io_elem_ = 0;
    std::vector<Cursor> cursors_;

    std::int64_t local_neighbor(std::int64_t local, int dir) const;
};

/// ECM kernel profile for the domain-wall kernel: externally supplied
/// in-core times plus layer-condition volumes for the given machine's L1
/// (private) and L2 (shared by `cores`).
KernelProfile dw_ecm_profile(const LatticeGeometry& geom, const OverrideTimes& times,
                             const MachineModel& model, int cores = 1, double w = 2.0);

} // namespace ecmkit
