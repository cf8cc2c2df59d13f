#include "ecmkit/lattice.hpp"

#include <random>

#include "ecmkit/errors.hpp"

namespace ecmkit {

namespace {
const cplx iu(0.0, 1.0);
}

// DeGrand-Rossi basis: gamma_x..gamma_t as row permutations with phases.
const int gamma_perm[4][4] = {
    {3, 2, 1, 0}, // gamma_x
    {3, 2, 1, 0}, // gamma_y
    {2, 3, 0, 1}, // gamma_z
    {2, 3, 0, 1}, // gamma_t
};
const cplx gamma_phase[4][4] = {
    {iu, iu, -iu, -iu},
    {-1.0, 1.0, 1.0, -1.0},
    {iu, -iu, -iu, iu},
    {1.0, 1.0, 1.0, 1.0},
};

void LatticeGeometry::validate() const {
    if (lx < 2 || ly < 2 || lz < 2 || lt < 2 || ls < 1)
        throw validation_error("lattice: extents must be >= 2 (ls >= 1)");
    if (lz % 2 != 0 || lt % 2 != 0)
        throw validation_error("lattice: z and t extents must be even (SIMD partition cuts)");
    if (cuts_y() && ly % 2 != 0)
        throw validation_error("lattice: y extent must be even for the RRII layout");
}

std::int64_t LatticeGeometry::site_index(const Coord& c) const {
    return ((static_cast<std::int64_t>(c.t) * lz + c.z) * ly + c.y) * lx + c.x;
}

LatticeGeometry::Coord LatticeGeometry::site_coord(std::int64_t site) const {
    Coord c;
    c.x = static_cast<int>(site % lx);
    site /= lx;
    c.y = static_cast<int>(site % ly);
    site /= ly;
    c.z = static_cast<int>(site % lz);
    c.t = static_cast<int>(site / lz);
    return c;
}

LatticeGeometry::Coord LatticeGeometry::neighbor(const Coord& c, int dir) const {
    Coord n = c;
    switch (dir) {
        case 0: n.x = (c.x + 1) % lx; break;
        case 1: n.x = (c.x + lx - 1) % lx; break;
        case 2: n.y = (c.y + 1) % ly; break;
        case 3: n.y = (c.y + ly - 1) % ly; break;
        case 4: n.z = (c.z + 1) % lz; break;
        case 5: n.z = (c.z + lz - 1) % lz; break;
        case 6: n.t = (c.t + 1) % lt; break;
        case 7: n.t = (c.t + lt - 1) % lt; break;
        default: throw internal_error("bad direction");
    }
    return n;
}

std::int64_t LatticeGeometry::local_index(const Coord& c) const {
    int x = c.x;
    int y = cuts_y() ? c.y % local_ly() : c.y;
    int z = c.z % local_lz();
    int t = c.t % local_lt();
    return ((static_cast<std::int64_t>(t) * local_lz() + z) * local_ly() + y) * local_lx() + x;
}

int LatticeGeometry::lane(const Coord& c) const {
    int pt = c.t / local_lt();
    int pz = c.z / local_lz();
    if (!cuts_y()) return pt * 2 + pz;
    int py = c.y / local_ly();
    return (pt * 2 + pz) * 2 + py;
}

FermionField::FermionField(const LatticeGeometry& geom) : geom_(geom) {
    geom_.validate();
    data_.assign(static_cast<size_t>(geom_.v4()) * geom_.ls * 24, 0.0);
}

std::int64_t FermionField::dof_index(std::int64_t site, int s, int c) const {
    LatticeGeometry::Coord co = geom_.site_coord(site);
    std::int64_t l = geom_.local_index(co);
    int lane = geom_.lane(co);
    int vl = geom_.vl_sites();
    std::int64_t elem = (l * geom_.ls + s) * 12 + c;
    if (geom_.layout == Layout::Riri) return elem * vl * 2 + lane * 2;
    return elem * vl * 2 + lane; // +vl for the imaginary block
}

cplx FermionField::get(std::int64_t site, int s, int alpha, int a) const {
    std::int64_t at = dof_index(site, s, alpha * 3 + a);
    if (geom_.layout == Layout::Riri) return {data_[at], data_[at + 1]};
    return {data_[at], data_[at + geom_.vl_sites()]};
}

void FermionField::set(std::int64_t site, int s, int alpha, int a, cplx v) {
    std::int64_t at = dof_index(site, s, alpha * 3 + a);
    if (geom_.layout == Layout::Riri) {
        data_[at] = v.real();
        data_[at + 1] = v.imag();
    } else {
        data_[at] = v.real();
        data_[at + geom_.vl_sites()] = v.imag();
    }
}

FermionField FermionField::random(const LatticeGeometry& geom, std::uint64_t seed) {
    FermionField f(geom);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (std::int64_t site = 0; site < geom.v4(); ++site)
        for (int s = 0; s < geom.ls; ++s)
            for (int alpha = 0; alpha < 4; ++alpha)
                for (int a = 0; a < 3; ++a)
                    f.set(site, s, alpha, a, {dist(rng), dist(rng)});
    return f;
}

std::vector<double> FermionField::to_vector() const {
    std::vector<double> v(data_.size());
    std::int64_t k = 0;
    for (std::int64_t site = 0; site < geom_.v4(); ++site)
        for (int s = 0; s < geom_.ls; ++s)
            for (int alpha = 0; alpha < 4; ++alpha)
                for (int a = 0; a < 3; ++a) {
                    cplx c = get(site, s, alpha, a);
                    v[k++] = c.real();
                    v[k++] = c.imag();
                }
    return v;
}

FermionField FermionField::from_vector(const LatticeGeometry& geom,
                                       const std::vector<double>& v) {
    FermionField f(geom);
    if (v.size() != f.data().size())
        throw validation_error("fermion vector length mismatch");
    std::int64_t k = 0;
    for (std::int64_t site = 0; site < geom.v4(); ++site)
        for (int s = 0; s < geom.ls; ++s)
            for (int alpha = 0; alpha < 4; ++alpha)
                for (int a = 0; a < 3; ++a) {
                    f.set(site, s, alpha, a, {v[k], v[k + 1]});
                    k += 2;
                }
    return f;
}

GaugeField::GaugeField(const LatticeGeometry& geom) : geom_(geom) {
    geom_.validate();
    data_.assign(static_cast<size_t>(kDwDirections) * geom_.v4() * 18, 0.0);
}

std::int64_t GaugeField::dof_index(int dir, std::int64_t site, int c) const {
    LatticeGeometry::Coord co = geom_.site_coord(site);
    std::int64_t l = geom_.local_index(co);
    int lane = geom_.lane(co);
    int vl = geom_.vl_sites();
    std::int64_t elem = (static_cast<std::int64_t>(dir) * geom_.local_v4() + l) * 9 + c;
    if (geom_.layout == Layout::Riri) return elem * vl * 2 + lane * 2;
    return elem * vl * 2 + lane;
}

cplx GaugeField::get(int dir, std::int64_t site, int row, int col) const {
    std::int64_t at = dof_index(dir, site, row * 3 + col);
    if (geom_.layout == Layout::Riri) return {data_[at], data_[at + 1]};
    return {data_[at], data_[at + geom_.vl_sites()]};
}

void GaugeField::set(int dir, std::int64_t site, int row, int col, cplx v) {
    std::int64_t at = dof_index(dir, site, row * 3 + col);
    if (geom_.layout == Layout::Riri) {
        data_[at] = v.real();
        data_[at + 1] = v.imag();
    } else {
        data_[at] = v.real();
        data_[at + geom_.vl_sites()] = v.imag();
    }
}

GaugeField GaugeField::random_links(const LatticeGeometry& geom, std::uint64_t seed) {
    GaugeField u(geom);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    // Forward links first, then the daggered shifted copies.
    std::vector<cplx> links(static_cast<size_t>(geom.v4()) * 4 * 9);
    for (auto& c : links) c = {dist(rng), dist(rng)};
    for (std::int64_t site = 0; site < geom.v4(); ++site) {
        LatticeGeometry::Coord co = geom.site_coord(site);
        for (int mu = 0; mu < 4; ++mu) {
            const cplx* fwd = &links[(site * 4 + mu) * 9];
            std::int64_t back = geom.site_index(geom.neighbor(co, 2 * mu + 1));
            const cplx* bwd = &links[(back * 4 + mu) * 9];
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) {
                    u.set(2 * mu, site, r, c, fwd[r * 3 + c]);
                    u.set(2 * mu + 1, site, r, c, std::conj(bwd[c * 3 + r]));
                }
        }
    }
    return u;
}

GaugeField GaugeField::unit_links(const LatticeGeometry& geom) {
    GaugeField u(geom);
    for (int dir = 0; dir < kDwDirections; ++dir)
        for (std::int64_t site = 0; site < geom.v4(); ++site)
            for (int r = 0; r < 3; ++r) u.set(dir, site, r, r, 1.0);
    return u;
}

} // namespace ecmkit
