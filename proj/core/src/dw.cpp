#include "ecmkit/dw.hpp"

#include <algorithm>
#include <thread>

#include "ecmkit/errors.hpp"

namespace ecmkit {

namespace {

/// Spin projection/reconstruction tables derived from the gamma basis. For
/// direction dir (mu = dir/2, sign + for forward, - for backward):
///   h_alpha       = psi_alpha + sign * phase[mu][alpha] * psi_perm[mu][alpha]
///   out_{2,3}    += sign * phase[mu][alpha] * (U h)_perm[mu][alpha]
/// which uses phase[mu][alpha] * phase[mu][perm[mu][alpha]] = 1 (gamma^2 = 1).
struct DirTable {
    int perm0, perm1;   // projection sources for h0, h1
    cplx ph0, ph1;      // projection phases (sign folded in)
    int rsrc2, rsrc3;   // reconstruction sources for out rows 2, 3
    cplx rc2, rc3;      // reconstruction coefficients
};

DirTable dir_table(int dir) {
    int mu = dir / 2;
    double sign = dir % 2 == 0 ? 1.0 : -1.0;
    DirTable t;
    t.perm0 = gamma_perm[mu][0];
    t.perm1 = gamma_perm[mu][1];
    t.ph0 = sign * gamma_phase[mu][0];
    t.ph1 = sign * gamma_phase[mu][1];
    t.rsrc2 = gamma_perm[mu][2];
    t.rsrc3 = gamma_perm[mu][3];
    t.rc2 = sign * gamma_phase[mu][2];
    t.rc3 = sign * gamma_phase[mu][3];
    return t;
}

template <typename F>
void run_blocks(std::int64_t n, int threads, F&& body) {
    threads = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(threads, n)));
    if (threads == 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int p = 0; p < threads; ++p)
        pool.emplace_back([&body, n, threads, p] { body(n * p / threads, n * (p + 1) / threads); });
    for (auto& t : pool) t.join();
}

/// One site update. Complex arithmetic is written out per layout: the RIRI
/// path uses fused complex multiply-accumulate order, the RRII path explicit
/// real/imaginary arithmetic. Both sum directions in the same order.
template <Layout layout>
void dw_site(const GaugeField& u, const FermionField& psi, FermionField& out,
             const LatticeGeometry& geom, std::int64_t site, int s) {
    cplx acc[4][3] = {};
    LatticeGeometry::Coord co = geom.site_coord(site);
    for (int dir = 0; dir < kDwDirections; ++dir) {
        const DirTable t = dir_table(dir);
        std::int64_t nb = geom.site_index(geom.neighbor(co, dir));

        cplx h[2][3];
        for (int a = 0; a < 3; ++a) {
            cplx p0 = psi.get(nb, s, 0, a);
            cplx p1 = psi.get(nb, s, 1, a);
            cplx q0 = psi.get(nb, s, t.perm0, a);
            cplx q1 = psi.get(nb, s, t.perm1, a);
            if constexpr (layout == Layout::Riri) {
                h[0][a] = p0 + t.ph0 * q0;
                h[1][a] = p1 + t.ph1 * q1;
            } else {
                h[0][a] = {p0.real() + (t.ph0 * q0).real(), p0.imag() + (t.ph0 * q0).imag()};
                h[1][a] = {p1.real() + (t.ph1 * q1).real(), p1.imag() + (t.ph1 * q1).imag()};
            }
        }

        cplx uh[2][3];
        for (int hs = 0; hs < 2; ++hs)
            for (int r = 0; r < 3; ++r) {
                if constexpr (layout == Layout::Riri) {
                    // fcmla-style: chained complex multiply-adds.
                    cplx v = u.get(dir, site, r, 0) * h[hs][0];
                    v += u.get(dir, site, r, 1) * h[hs][1];
                    v += u.get(dir, site, r, 2) * h[hs][2];
                    uh[hs][r] = v;
                } else {
                    // Split real arithmetic: accumulate re and im separately.
                    double re = 0.0, im = 0.0;
                    for (int c = 0; c < 3; ++c) {
                        cplx m = u.get(dir, site, r, c);
                        re += m.real() * h[hs][c].real() - m.imag() * h[hs][c].imag();
                        im += m.real() * h[hs][c].imag() + m.imag() * h[hs][c].real();
                    }
                    uh[hs][r] = {re, im};
                }
            }

        for (int a = 0; a < 3; ++a) {
            acc[0][a] += uh[0][a];
            acc[1][a] += uh[1][a];
            acc[2][a] += t.rc2 * uh[t.rsrc2][a];
            acc[3][a] += t.rc3 * uh[t.rsrc3][a];
        }
    }
    for (int alpha = 0; alpha < 4; ++alpha)
        for (int a = 0; a < 3; ++a) out.set(site, s, alpha, a, acc[alpha][a]);
}

} // namespace

FermionField dw_apply(const GaugeField& u, const FermionField& psi, int threads) {
    const LatticeGeometry& geom = psi.geom();
    if (u.geom().lx != geom.lx || u.geom().ly != geom.ly || u.geom().lz != geom.lz ||
        u.geom().lt != geom.lt || u.geom().layout != geom.layout)
        throw validation_error("dw_apply: gauge/fermion geometry mismatch");

    FermionField out(geom);
    run_blocks(geom.v4(), threads, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t site = lo; site < hi; ++site)
            for (int s = 0; s < geom.ls; ++s) {
                if (geom.layout == Layout::Riri)
                    dw_site<Layout::Riri>(u, psi, out, geom, site, s);
                else
                    dw_site<Layout::Rrii>(u, psi, out, geom, site, s);
            }
    });
    return out;
}

CrsMatrix dw_matrix(const GaugeField& u, int threads) {
    const LatticeGeometry& geom = u.geom();
    std::int64_t dim = geom.lups() * 24;
    if (dim > 100000)
        throw validation_error("dw_matrix: " + std::to_string(dim) +
                               " dimensions exceed the 1e5 oracle guard");

    // Column-by-column assembly from unit vectors.
    std::vector<std::vector<std::pair<std::int64_t, double>>> cols(dim);
    run_blocks(dim, threads, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<double> e(dim, 0.0);
        for (std::int64_t j = lo; j < hi; ++j) {
            e[j] = 1.0;
            FermionField col = dw_apply(u, FermionField::from_vector(geom, e), 1);
            e[j] = 0.0;
            std::vector<double> y = col.to_vector();
            for (std::int64_t i = 0; i < dim; ++i)
                if (y[i] != 0.0) cols[j].emplace_back(i, y[i]);
        }
    });

    std::vector<std::int64_t> count(dim, 0);
    for (const auto& col : cols)
        for (const auto& [i, v] : col) ++count[i];

    CrsMatrix m;
    m.nrows = dim;
    m.ncols = dim;
    m.rp.assign(dim + 1, 0);
    for (std::int64_t i = 0; i < dim; ++i) m.rp[i + 1] = m.rp[i] + count[i];
    m.ci.resize(m.rp[dim]);
    m.val.resize(m.rp[dim]);
    std::vector<std::int64_t> next(m.rp.begin(), m.rp.end() - 1);
    for (std::int64_t j = 0; j < dim; ++j)
        for (const auto& [i, v] : cols[j]) {
            m.ci[next[i]] = static_cast<std::int32_t>(j);
            m.val[next[i]] = v;
            ++next[i];
        }
    m.validate();
    return m;
}

int dw_flops_executed(Layout layout) {
    // The interleaved layout multiplies through fcmla, whose zero-adding
    // first term costs 2*3*2*8 = 96 extra flops per update.
    return layout == Layout::Riri ? kDwFlopsNominal + 96 : kDwFlopsNominal;
}

DwTraceSource::DwTraceSource(const LatticeGeometry& geom, int cores, int passes)
    : geom_(geom), ncores_(cores), passes_(passes) {
    geom_.validate();
    if (cores < 1 || cores > 255) throw validation_error("dw_trace: core count out of range");
    if (passes < 1) throw validation_error("dw_trace: passes must be >= 1");

    u_elem_ = static_cast<std::uint32_t>(9 * geom_.vl_sites() * 16);
    io_elem_ = static_cast<std::uint32_t>(12 * geom_.vl_sites() * 16);
    std::uint64_t page = AccessTrace::kPageBytes;
    auto align = [&](std::uint64_t a) { return (a + page - 1) / page * page; };
    std::uint64_t lv4 = static_cast<std::uint64_t>(geom_.local_v4());
    base_u_ = 0;
    base_i_ = align(base_u_ + kDwDirections * lv4 * u_elem_);
    base_o_ = align(base_i_ + lv4 * geom_.ls * io_elem_);
    top_ = base_o_ + lv4 * geom_.ls * io_elem_;

    cursors_.resize(ncores_);
    reset();
}

std::uint64_t DwTraceSource::norm_units() const {
    return static_cast<std::uint64_t>(geom_.lups()) * passes_;
}

void DwTraceSource::reset() {
    std::int64_t n = geom_.local_v4();
    for (int c = 0; c < ncores_; ++c) {
        Cursor& cur = cursors_[c];
        cur.begin = n * c / ncores_;
        cur.end = n * (c + 1) / ncores_;
        cur.site = cur.begin;
        cur.s = 0;
        cur.phase = 0;
        cur.pass = 0;
    }
}

std::int64_t DwTraceSource::local_neighbor(std::int64_t local, int dir) const {
    const int nx = geom_.local_lx(), ny = geom_.local_ly(), nz = geom_.local_lz(),
              nt = geom_.local_lt();
    int x = static_cast<int>(local % nx);
    std::int64_t rest = local / nx;
    int y = static_cast<int>(rest % ny);
    rest /= ny;
    int z = static_cast<int>(rest % nz);
    int t = static_cast<int>(rest / nz);
    switch (dir) {
        case 0: x = (x + 1) % nx; break;
        case 1: x = (x + nx - 1) % nx; break;
        case 2: y = (y + 1) % ny; break;
        case 3: y = (y + ny - 1) % ny; break;
        case 4: z = (z + 1) % nz; break;
        case 5: z = (z + nz - 1) % nz; break;
        case 6: t = (t + 1) % nt; break;
        case 7: t = (t + nt - 1) % nt; break;
        default: throw internal_error("bad direction");
    }
    return ((static_cast<std::int64_t>(t) * nz + z) * ny + y) * nx + x;
}

bool DwTraceSource::next(int core, TraceEvent& ev) {
    Cursor& cur = cursors_[core];
    if (cur.pass >= passes_) return false;

    ev.core = static_cast<std::uint8_t>(core);
    if (cur.phase < 16) {
        int dir = cur.phase / 2;
        if (cur.phase % 2 == 0) {
            ev.kind = AccessKind::Read;
            ev.tag = 0; // U
            ev.addr = base_u_ + (static_cast<std::uint64_t>(dir) * geom_.local_v4() + cur.site) *
                                    u_elem_;
            ev.size = u_elem_;
        } else {
            ev.kind = AccessKind::Read;
            ev.tag = 1; // I
            std::int64_t nb = local_neighbor(cur.site, dir);
            ev.addr = base_i_ + (static_cast<std::uint64_t>(nb) * geom_.ls + cur.s) * io_elem_;
            ev.size = io_elem_;
        }
        ++cur.phase;
        return true;
    }

    ev.kind = AccessKind::Write;
    ev.tag = 2; // O
    ev.addr = base_o_ + (static_cast<std::uint64_t>(cur.site) * geom_.ls + cur.s) * io_elem_;
    ev.size = io_elem_;

    cur.phase = 0;
    if (++cur.s == geom_.ls) {
        cur.s = 0;
        if (++cur.site == cur.end) {
            cur.site = cur.begin;
            ++cur.pass;
        }
    }
    return true;
}

KernelProfile dw_ecm_profile(const LatticeGeometry& geom, const OverrideTimes& times,
                             const MachineModel& model, int cores, double w) {
    LcReport l1 = lc_analyze(geom, static_cast<double>(model.level("L1").capacity_bytes),
                             LcMode::Vectorized, 1, w);
    LcReport l2 = lc_analyze(geom, static_cast<double>(model.level("L2").capacity_bytes),
                             LcMode::Vectorized, cores, w);

    KernelProfile p;
    p.name = geom.layout == Layout::Riri ? "dw_riri" : "dw_rrii";
    p.unit = "per-LUP";
    p.load_dominated = true;
    p.override_times = times;
    const double store = 12 * 16.0; // one output spinor per update
    p.vol_l1l2 = BoundaryVolume{l1.v_bytes_per_lup() - store, store};
    p.vol_l2mem = BoundaryVolume{l2.v_bytes_per_lup() - store, store};
    return p;
}

} // namespace ecmkit
