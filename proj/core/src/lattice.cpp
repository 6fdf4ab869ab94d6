#include "qspace/lattice.hpp"

#include <json.hpp>

#include <cmath>

namespace qspace {

LatticeFn::LatticeFn(double q, JWindow wp, JWindow w3, JWindow wm)
    : q_(q), wp_(wp), w3_(w3), wm_(wm) {
    if (q <= 1.0) throw lattice_error("lattice backend requires numeric q > 1");
    v_.assign(static_cast<size_t>(2 * wp_.count()) * (2 * w3_.count()) * (2 * wm_.count()),
              cplx(0.0, 0.0));
}

const JWindow& LatticeFn::window(Idx a) const {
    switch (a) {
        case Idx::Plus: return wp_;
        case Idx::Three: return w3_;
        case Idx::Minus: return wm_;
        default: throw lattice_error("lattice window: spatial index expected");
    }
}

bool LatticeFn::empty() const {
    return wp_.empty() || w3_.empty() || wm_.empty();
}

int LatticeFn::offset(int sp, int jp, int s3, int j3, int sm, int jm) const {
    const int np = wp_.count(), n3 = w3_.count(), nm = wm_.count();
    const int ip = (sp < 0 ? np : 0) + (jp - wp_.jmin);
    const int i3 = (s3 < 0 ? n3 : 0) + (j3 - w3_.jmin);
    const int im = (sm < 0 ? nm : 0) + (jm - wm_.jmin);
    return (ip * 2 * n3 + i3) * 2 * nm + im;
}

cplx& LatticeFn::at(GridPt p, GridPt t3, GridPt m) {
    if (p.j < wp_.jmin || p.j > wp_.jmax || t3.j < w3_.jmin || t3.j > w3_.jmax ||
        m.j < wm_.jmin || m.j > wm_.jmax)
        throw lattice_error("grid point outside the window");
    return v_[offset(p.sign, p.j, t3.sign, t3.j, m.sign, m.j)];
}

cplx LatticeFn::value(GridPt p, GridPt t3, GridPt m) const {
    if (p.j < wp_.jmin || p.j > wp_.jmax || t3.j < w3_.jmin || t3.j > w3_.jmax ||
        m.j < wm_.jmin || m.j > wm_.jmax)
        return {0.0, 0.0};
    return v_[offset(p.sign, p.j, t3.sign, t3.j, m.sign, m.j)];
}

namespace {
template <typename F>
void for_each_point(const JWindow& wp, const JWindow& w3, const JWindow& wm, F&& f) {
    for (int sp : {+1, -1})
        for (int jp = wp.jmin; jp <= wp.jmax; ++jp)
            for (int s3 : {+1, -1})
                for (int j3 = w3.jmin; j3 <= w3.jmax; ++j3)
                    for (int sm : {+1, -1})
                        for (int jm = wm.jmin; jm <= wm.jmax; ++jm)
                            f(GridPt{sp, jp}, GridPt{s3, j3}, GridPt{sm, jm});
}
}  // namespace

LatticeFn LatticeFn::operator+(const LatticeFn& o) const {
    if (q_ != o.q_) throw lattice_error("mismatched q");
    LatticeFn r(q_, wp_.intersect(o.wp_), w3_.intersect(o.w3_), wm_.intersect(o.wm_));
    if (r.empty()) throw lattice_error("window exhausted in addition");
    for_each_point(r.wp_, r.w3_, r.wm_, [&](GridPt p, GridPt t3, GridPt m) {
        r.at(p, t3, m) = value(p, t3, m) + o.value(p, t3, m);
    });
    return r;
}

LatticeFn LatticeFn::operator-(const LatticeFn& o) const {
    return *this + o.scaled(cplx(-1.0, 0.0));
}

LatticeFn LatticeFn::scaled(cplx c) const {
    LatticeFn r = *this;
    for (auto& v : r.v_) v *= c;
    return r;
}

LatticeFn LatticeFn::jackson_D(long base_q_pow, Idx var) const {
    if (base_q_pow <= 0) throw lattice_error("lattice Jackson derivative needs base q^k, k>0");
    JWindow wp = wp_, w3 = w3_, wm = wm_;
    JWindow& w = var == Idx::Plus ? wp : (var == Idx::Three ? w3 : wm);
    w.jmax -= static_cast<int>(base_q_pow);
    if (w.empty()) throw lattice_error("window exhausted by the Jackson derivative");
    LatticeFn r(q_, wp, w3, wm);
    const double factor = std::pow(q_, static_cast<double>(base_q_pow)) - 1.0;
    for_each_point(wp, w3, wm, [&](GridPt p, GridPt t3, GridPt m) {
        GridPt up_p = p, up_3 = t3, up_m = m;
        GridPt& u = var == Idx::Plus ? up_p : (var == Idx::Three ? up_3 : up_m);
        const GridPt base = u;
        u.j += static_cast<int>(base_q_pow);
        const double x = base.sign * std::pow(q_, base.j);
        r.at(p, t3, m) = (value(up_p, up_3, up_m) - value(p, t3, m)) / (factor * x);
    });
    return r;
}

LatticeFn LatticeFn::scale_var(Idx var, long a) const {
    JWindow wp = wp_, w3 = w3_, wm = wm_;
    JWindow& w = var == Idx::Plus ? wp : (var == Idx::Three ? w3 : wm);
    w = w.shifted(static_cast<int>(a));
    LatticeFn r(q_, wp, w3, wm);
    for_each_point(wp, w3, wm, [&](GridPt p, GridPt t3, GridPt m) {
        GridPt up_p = p, up_3 = t3, up_m = m;
        GridPt& u = var == Idx::Plus ? up_p : (var == Idx::Three ? up_3 : up_m);
        u.j += static_cast<int>(a);
        r.at(p, t3, m) = value(up_p, up_3, up_m);
    });
    return r;
}

LatticeFn LatticeFn::mul_coordinate(Idx var) const {
    LatticeFn r = *this;
    for_each_point(wp_, w3_, wm_, [&](GridPt p, GridPt t3, GridPt m) {
        const GridPt& u = var == Idx::Plus ? p : (var == Idx::Three ? t3 : m);
        r.at(p, t3, m) = value(p, t3, m) * (u.sign * std::pow(q_, u.j));
    });
    return r;
}

LatticeFn LatticeFn::conjugate() const {
    // conj(f)(x+, x3, x-) = conj(f(-q x-, x3, -q^-1 x+))
    JWindow wp{wm_.jmin - 1, wm_.jmax - 1};  // x+ slot reads x- data at j+1
    JWindow wm{wp_.jmin + 1, wp_.jmax + 1};  // x- slot reads x+ data at j-1
    LatticeFn r(q_, wp, w3_, wm);
    for_each_point(wp, w3_, wm, [&](GridPt p, GridPt t3, GridPt m) {
        const GridPt src_m{-p.sign, p.j + 1};   // -q x- slot value
        const GridPt src_p{-m.sign, m.j - 1};   // -q^-1 x+ slot value
        r.at(p, t3, m) = std::conj(value(src_p, t3, src_m));
    });
    return r;
}

double LatticeFn::max_abs() const {
    double m = 0;
    for (const auto& v : v_) m = std::max(m, std::abs(v));
    return m;
}

LatticeFn LatticeFn::sample(double q, JWindow wp, JWindow w3, JWindow wm,
                            const std::function<cplx(double, double, double)>& f) {
    LatticeFn r(q, wp, w3, wm);
    for_each_point(wp, w3, wm, [&](GridPt p, GridPt t3, GridPt m) {
        r.at(p, t3, m) = f(p.sign * std::pow(q, p.j), t3.sign * std::pow(q, t3.j),
                           m.sign * std::pow(q, m.j));
    });
    return r;
}

std::string LatticeFn::to_json() const {
    nlohmann::json j;
    j["q"] = q_;
    j["jmin"] = std::min({wp_.jmin, w3_.jmin, wm_.jmin});
    j["jmax"] = std::max({wp_.jmax, w3_.jmax, wm_.jmax});
    j["windows"] = {{"x+", {wp_.jmin, wp_.jmax}},
                    {"x3", {w3_.jmin, w3_.jmax}},
                    {"x-", {wm_.jmin, wm_.jmax}}};
    nlohmann::json vals = nlohmann::json::array();
    for_each_point(wp_, w3_, wm_, [&](GridPt p, GridPt t3, GridPt m) {
        const cplx v = value(p, t3, m);
        if (v == cplx(0.0, 0.0)) return;
        vals.push_back({p.sign, p.j, t3.sign, t3.j, m.sign, m.j, v.real(), v.imag()});
    });
    j["values"] = std::move(vals);
    return j.dump();
}

LatticeFn LatticeFn::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    const double q = j.at("q").get<double>();
    JWindow wp, w3, wm;
    if (j.contains("windows")) {
        auto w = j.at("windows");
        wp = {w.at("x+")[0].get<int>(), w.at("x+")[1].get<int>()};
        w3 = {w.at("x3")[0].get<int>(), w.at("x3")[1].get<int>()};
        wm = {w.at("x-")[0].get<int>(), w.at("x-")[1].get<int>()};
    } else {
        const int jmin = j.at("jmin").get<int>();
        const int jmax = j.at("jmax").get<int>();
        wp = w3 = wm = {jmin, jmax};
    }
    LatticeFn r(q, wp, w3, wm);
    for (const auto& row : j.at("values")) {
        r.at({row[0].get<int>(), row[1].get<int>()}, {row[2].get<int>(), row[3].get<int>()},
             {row[4].get<int>(), row[5].get<int>()}) =
            cplx(row[6].get<double>(), row[7].get<double>());
    }
    return r;
}

double lattice_weight(double q, long base_q_pow, int j) {
    return (std::pow(q, static_cast<double>(base_q_pow)) - 1.0) /
           static_cast<double>(base_q_pow) * std::pow(q, j);
}

LatticeFn jackson_integral(const LatticeFn& f, Idx var, long base_q_pow,
                           IntegralLimits limits) {
    if (f.q() <= 1.0) throw lattice_error("jackson_integral: q > 1 required");
    const int b = static_cast<int>(base_q_pow);
    if (b <= 0) throw lattice_error("jackson_integral: base q^k with k > 0 required");
    const JWindow w = f.window(var);
    const double qb = std::pow(f.q(), b);
    JWindow wp = f.window(Idx::Plus), w3 = f.window(Idx::Three), wm = f.window(Idx::Minus);

    if (limits == IntegralLimits::FullLine) {
        JWindow collapsed{0, 0};
        LatticeFn out(f.q(), var == Idx::Plus ? collapsed : wp,
                      var == Idx::Three ? collapsed : w3,
                      var == Idx::Minus ? collapsed : wm);
        auto set_axis = [&](GridPt& p, GridPt& t3, GridPt& m) -> GridPt& {
            return var == Idx::Plus ? p : (var == Idx::Three ? t3 : m);
        };
        for (int sp : {+1, -1})
            for (int jp = out.window(Idx::Plus).jmin; jp <= out.window(Idx::Plus).jmax; ++jp)
                for (int s3 : {+1, -1})
                    for (int j3 = out.window(Idx::Three).jmin;
                         j3 <= out.window(Idx::Three).jmax; ++j3)
                        for (int sm : {+1, -1})
                            for (int jm = out.window(Idx::Minus).jmin;
                                 jm <= out.window(Idx::Minus).jmax; ++jm) {
                                GridPt p{sp, jp}, t3{s3, j3}, m{sm, jm};
                                GridPt& axis = set_axis(p, t3, m);
                                if (axis.sign < 0) {
                                    out.at(p, t3, m) = 0.0;  // value carried on + slot
                                    continue;
                                }
                                cplx acc = 0.0;
                                for (int sign : {+1, -1}) {
                                    for (int j = w.jmin; j <= w.jmax; ++j) {
                                        GridPt pp = p, p3 = t3, pm = m;
                                        GridPt& ax = set_axis(pp, p3, pm);
                                        ax = GridPt{sign, j};
                                        acc += lattice_weight(f.q(), b, j) *
                                               f.value(pp, p3, pm);
                                    }
                                }
                                out.at(p, t3, m) = acc;
                            }
        return out;
    }

    LatticeFn out(f.q(), wp, w3, wm);
    for (int sp : {+1, -1})
        for (int jp = wp.jmin; jp <= wp.jmax; ++jp)
            for (int s3 : {+1, -1})
                for (int j3 = w3.jmin; j3 <= w3.jmax; ++j3)
                    for (int sm : {+1, -1})
                        for (int jm = wm.jmin; jm <= wm.jmax; ++jm) {
                            GridPt p{sp, jp}, t3{s3, j3}, m{sm, jm};
                            GridPt& axis = var == Idx::Plus ? p : (var == Idx::Three ? t3 : m);
                            const double x = axis.sign * std::pow(f.q(), axis.j);
                            cplx acc = 0.0;
                            if (limits == IntegralLimits::ZeroToX) {
                                for (int mstep = 1;; ++mstep) {
                                    const int jj = axis.j - b * mstep;
                                    if (jj < w.jmin) break;
                                    GridPt pp = p, p3 = t3, pm = m;
                                    GridPt& ax = var == Idx::Plus ? pp
                                                 : (var == Idx::Three ? p3 : pm);
                                    ax.j = jj;
                                    acc += std::pow(qb, -mstep) * f.value(pp, p3, pm);
                                }
                            } else {
                                for (int mstep = 0;; ++mstep) {
                                    const int jj = axis.j + b * mstep;
                                    if (jj > w.jmax) break;
                                    GridPt pp = p, p3 = t3, pm = m;
                                    GridPt& ax = var == Idx::Plus ? pp
                                                 : (var == Idx::Three ? p3 : pm);
                                    ax.j = jj;
                                    acc += std::pow(qb, mstep) * f.value(pp, p3, pm);
                                }
                            }
                            out.at(p, t3, m) = (qb - 1.0) * x * acc;
                        }
    return out;
}

cplx volume_integral(const LatticeFn& f) {
    cplx acc = 0.0;
    for (int sp : {+1, -1})
        for (int jp = f.window(Idx::Plus).jmin; jp <= f.window(Idx::Plus).jmax; ++jp)
            for (int s3 : {+1, -1})
                for (int j3 = f.window(Idx::Three).jmin; j3 <= f.window(Idx::Three).jmax;
                     ++j3)
                    for (int sm : {+1, -1})
                        for (int jm = f.window(Idx::Minus).jmin;
                             jm <= f.window(Idx::Minus).jmax; ++jm) {
                            const double w = lattice_weight(f.q(), 2, jp) *
                                             lattice_weight(f.q(), 1, j3) *
                                             lattice_weight(f.q(), 2, jm);
                            acc += w * f.value({sp, jp}, {s3, j3}, {sm, jm});
                        }
    return acc;
}

cplx weighted_overlap(const LatticeFn& f, const LatticeFn& g) {
    if (f.q() != g.q()) throw lattice_error("mismatched q");
    const JWindow wp = f.window(Idx::Plus).intersect(g.window(Idx::Plus));
    const JWindow w3 = f.window(Idx::Three).intersect(g.window(Idx::Three));
    const JWindow wm = f.window(Idx::Minus).intersect(g.window(Idx::Minus));
    cplx acc = 0.0;
    for (int sp : {+1, -1})
        for (int jp = wp.jmin; jp <= wp.jmax; ++jp)
            for (int s3 : {+1, -1})
                for (int j3 = w3.jmin; j3 <= w3.jmax; ++j3)
                    for (int sm : {+1, -1})
                        for (int jm = wm.jmin; jm <= wm.jmax; ++jm) {
                            const double w = lattice_weight(f.q(), 2, jp) *
                                             lattice_weight(f.q(), 1, j3) *
                                             lattice_weight(f.q(), 2, jm);
                            acc += w *
                                   std::conj(f.value({sp, jp}, {s3, j3}, {sm, jm})) *
                                   g.value({sp, jp}, {s3, j3}, {sm, jm});
                        }
    return acc;
}

}  // namespace qspace
