#include "qspace/rmatrix.hpp"

namespace qspace {

std::string idx_name(Idx i) {
    switch (i) {
        case Idx::Zero: return "0";
        case Idx::Plus: return "+";
        case Idx::Three: return "3";
        case Idx::Minus: return "-";
    }
    return "?";
}

// ---- QMatrix ----------------------------------------------------------------

QMatrix QMatrix::identity(int n) {
    QMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = QScalar(1);
    return m;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
    QMatrix r(n_);
    for (int i = 0; i < n_ * n_; ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
    QMatrix r(n_);
    for (int i = 0; i < n_ * n_; ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
    QMatrix r(n_);
    for (int i = 0; i < n_; ++i) {
        for (int k = 0; k < n_; ++k) {
            const QScalar& v = at(i, k);
            if (v.is_zero()) continue;
            for (int j = 0; j < n_; ++j) {
                if (o.at(k, j).is_zero()) continue;
                r.at(i, j) += v * o.at(k, j);
            }
        }
    }
    return r;
}

QMatrix QMatrix::scaled(const QScalar& c) const {
    QMatrix r(n_);
    for (int i = 0; i < n_ * n_; ++i) r.a_[i] = a_[i] * c;
    return r;
}

bool QMatrix::is_zero() const {
    for (const auto& v : a_)
        if (!v.is_zero()) return false;
    return true;
}

QMatrix QMatrix::inverse() const {
    QMatrix aug = *this;
    QMatrix inv = identity(n_);
    for (int col = 0; col < n_; ++col) {
        int pivot = -1;
        for (int r = col; r < n_; ++r) {
            if (!aug.at(r, col).is_zero()) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) throw rmatrix_error("singular matrix");
        if (pivot != col) {
            for (int j = 0; j < n_; ++j) {
                std::swap(aug.at(pivot, j), aug.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        }
        const QScalar pinv = aug.at(col, col).inverse();
        for (int j = 0; j < n_; ++j) {
            aug.at(col, j) = aug.at(col, j) * pinv;
            inv.at(col, j) = inv.at(col, j) * pinv;
        }
        for (int r = 0; r < n_; ++r) {
            if (r == col || aug.at(r, col).is_zero()) continue;
            const QScalar f = aug.at(r, col);
            for (int j = 0; j < n_; ++j) {
                aug.at(r, j) = aug.at(r, j) - f * aug.at(col, j);
                inv.at(r, j) = inv.at(r, j) - f * inv.at(col, j);
            }
        }
    }
    return inv;
}

// ---- PairBasis ----------------------------------------------------------------

namespace {
constexpr std::array<std::pair<Idx, Idx>, 16> kPairs = {{
    {Idx::Plus, Idx::Plus},   {Idx::Minus, Idx::Minus}, {Idx::Plus, Idx::Three},
    {Idx::Three, Idx::Plus},  {Idx::Three, Idx::Minus}, {Idx::Minus, Idx::Three},
    {Idx::Plus, Idx::Minus},  {Idx::Three, Idx::Three}, {Idx::Minus, Idx::Plus},
    {Idx::Zero, Idx::Zero},   {Idx::Zero, Idx::Plus},   {Idx::Zero, Idx::Three},
    {Idx::Zero, Idx::Minus},  {Idx::Plus, Idx::Zero},   {Idx::Three, Idx::Zero},
    {Idx::Minus, Idx::Zero},
}};
}  // namespace

int PairBasis::position(Idx a, Idx b) {
    for (int k = 0; k < 16; ++k)
        if (kPairs[k].first == a && kPairs[k].second == b) return k;
    throw rmatrix_error("bad index pair");
}

std::pair<Idx, Idx> PairBasis::pair_at(int k) { return kPairs.at(k); }

int PairBasis::spatial_position(Idx a, Idx b) {
    const int k = position(a, b);
    if (k >= spatial_dim) throw rmatrix_error("pair touches the time index");
    return k;
}

// ---- ExtendedParams -------------------------------------------------------------

QScalar ExtendedParams::sqrt_de() const {
    if (d == e) return d;
    const QScalar de = d * e;
    const RScalar root = RScalar::sqrt_of(de);
    QScalar plain;
    if (!root.is_plain(&plain))
        throw rmatrix_error("sqrt(d*e) is not an exact power of q; unsupported params");
    return plain;
}

void ExtendedParams::validate() const {
    const QScalar r = sqrt_de();
    const QScalar q6 = QScalar::q_power(-6);
    const QScalar mq4 = -QScalar::q_power(-4);
    if (r.is_zero()) throw rmatrix_error("sqrt(de) must be nonzero");
    for (const QScalar& bad :
         {QScalar(1), q6, mq4, a, -a, -QScalar(1), -q6, -mq4}) {
        if (r == bad)
            throw rmatrix_error("eigenvalue collision: sqrt(de) equals " + bad.to_string());
    }
}

// ---- rhat ---------------------------------------------------------------------

QMatrix rhat(bool extended, const ExtendedParams& params) {
    const int n = extended ? PairBasis::extended_dim : PairBasis::spatial_dim;
    QMatrix m(n);
    const QScalar q2 = QScalar::q_power(-2);
    const QScalar q3 = QScalar::q_power(-3);
    const QScalar q4 = QScalar::q_power(-4);
    const QScalar ll = QScalar::lambda() * QScalar::lambda_plus();
    const QScalar l2l = QScalar::lambda() * QScalar::lambda() * QScalar::lambda_plus();
    auto set = [&](const char* row, const char* col, const QScalar& v) {
        auto one = [](char c) {
            switch (c) {
                case '0': return Idx::Zero;
                case '+': return Idx::Plus;
                case '3': return Idx::Three;
                default: return Idx::Minus;
            }
        };
        m.at(PairBasis::position(one(row[0]), one(row[1])),
             PairBasis::position(one(col[0]), one(col[1]))) = v;
    };
    set("++", "++", QScalar(1));
    set("--", "--", QScalar(1));
    set("+3", "3+", q2);
    set("3+", "+3", q2);
    set("3+", "3+", q2 * ll);
    set("3-", "-3", q2);
    set("-3", "3-", q2);
    set("-3", "-3", q2 * ll);
    set("+-", "-+", q4);
    set("33", "33", q2);
    set("33", "-+", q3 * ll);
    set("-+", "+-", q4);
    set("-+", "33", q3 * ll);
    set("-+", "-+", q3 * l2l);
    if (extended) {
        params.validate();
        set("00", "00", params.a);
        set("0+", "+0", params.d);
        set("03", "30", params.d);
        set("0-", "-0", params.d);
        set("+0", "0+", params.e);
        set("30", "03", params.e);
        set("-0", "0-", params.e);
    }
    return m;
}

QMatrix rhat_inverse(bool extended, const ExtendedParams& params) {
    return rhat(extended, params).inverse();
}

// ---- projectors -----------------------------------------------------------------

namespace {

QMatrix embed_spatial(const QMatrix& m9) {
    QMatrix m(PairBasis::extended_dim);
    for (int i = 0; i < PairBasis::spatial_dim; ++i)
        for (int j = 0; j < PairBasis::spatial_dim; ++j) m.at(i, j) = m9.at(i, j);
    return m;
}

}  // namespace

std::vector<Projector> projectors(bool extended, const ExtendedParams& params) {
    const QMatrix r9 = rhat(false, params);
    const QMatrix id9 = QMatrix::identity(9);
    const QScalar one(1);
    const QScalar mu_t = QScalar::q_power(-6);
    const QScalar mu_a = -QScalar::q_power(-4);

    auto spectral = [&](const QScalar& keep, const QScalar& k1, const QScalar& k2) {
        const QMatrix num = (r9 - id9.scaled(k1)) * (r9 - id9.scaled(k2));
        const QScalar den = (keep - k1) * (keep - k2);
        return num.scaled(den.inverse());
    };

    QMatrix ps = spectral(one, mu_t, mu_a);
    QMatrix pt = spectral(mu_t, one, mu_a);
    QMatrix pa = spectral(mu_a, one, mu_t);

    std::vector<Projector> out;
    if (!extended) {
        out.push_back({ProjectorKind::PS, std::move(ps)});
        out.push_back({ProjectorKind::PT, std::move(pt)});
        out.push_back({ProjectorKind::PA, std::move(pa)});
        return out;
    }

    params.validate();
    const QMatrix r16 = rhat(true, params);
    const QMatrix id16 = QMatrix::identity(16);
    const QScalar rde = params.sqrt_de();
    const QScalar q6 = QScalar::q_power(-6);
    const QScalar q4 = QScalar::q_power(-4);

    auto poly5 = [&](const QScalar& sign_rde) {
        return (r16 + id16.scaled(sign_rde)) * (r16 - id16) * (r16 - id16.scaled(q6)) *
               (r16 + id16.scaled(q4)) * (r16 - id16.scaled(params.a));
    };
    const QScalar two(2);
    const QScalar denp =
        two * rde * (rde - QScalar(1)) * (rde - q6) * (rde + q4) * (rde - params.a);
    const QScalar denm =
        -(two * rde) * (rde + QScalar(1)) * (rde + q6) * (rde - q4) * (rde + params.a);
    QMatrix pplus = poly5(rde).scaled(denp.inverse());
    QMatrix pminus = poly5(-rde).scaled(denm.inverse());

    QMatrix pa_ext(16);
    pa_ext.at(PairBasis::position(Idx::Zero, Idx::Zero),
              PairBasis::position(Idx::Zero, Idx::Zero)) = QScalar(1);

    out.push_back({ProjectorKind::PS, embed_spatial(ps)});
    out.push_back({ProjectorKind::PT, embed_spatial(pt)});
    out.push_back({ProjectorKind::PA, embed_spatial(pa)});
    out.push_back({ProjectorKind::Pplus, std::move(pplus)});
    out.push_back({ProjectorKind::Pminus, std::move(pminus)});
    out.push_back({ProjectorKind::Pa, std::move(pa_ext)});
    return out;
}

// ---- metric --------------------------------------------------------------------

QScalar metric_upper(Idx a, Idx b) {
    if (a == Idx::Plus && b == Idx::Minus) return -QScalar::q_power(1);
    if (a == Idx::Three && b == Idx::Three) return QScalar(1);
    if (a == Idx::Minus && b == Idx::Plus) return -QScalar::q_power(-1);
    return QScalar();
}

QScalar metric_lower(Idx a, Idx b) { return metric_upper(a, b); }

std::pair<Idx, QScalar> lower_index(Idx a) {
    switch (a) {
        case Idx::Plus: return {Idx::Minus, -QScalar::q_power(1)};
        case Idx::Three: return {Idx::Three, QScalar(1)};
        case Idx::Minus: return {Idx::Plus, -QScalar::q_power(-1)};
        case Idx::Zero: return {Idx::Zero, QScalar(1)};
    }
    throw rmatrix_error("bad index");
}

std::pair<Idx, QScalar> raise_index(Idx a) { return lower_index(a); }

// ---- identity suite ---------------------------------------------------------------

std::vector<CheckResult> rmatrix_identity_check(const ExtendedParams& params) {
    std::vector<CheckResult> out;
    auto record = [&](const std::string& name, bool ok, const std::string& detail = "") {
        out.push_back({name, ok, detail});
    };

    const QMatrix r9 = rhat(false, params);
    const QMatrix id9 = QMatrix::identity(9);
    const QScalar q6 = QScalar::q_power(-6);
    const QScalar q4 = QScalar::q_power(-4);

    record("entry ++,++ = 1",
           r9.at(PairBasis::position(Idx::Plus, Idx::Plus),
                 PairBasis::position(Idx::Plus, Idx::Plus)) == QScalar(1));
    record("entry +3,3+ = q^-2",
           r9.at(PairBasis::position(Idx::Plus, Idx::Three),
                 PairBasis::position(Idx::Three, Idx::Plus)) == QScalar::q_power(-2));
    record("entry -+,-+ = q^-3 lambda^2 lambda_+",
           r9.at(PairBasis::position(Idx::Minus, Idx::Plus),
                 PairBasis::position(Idx::Minus, Idx::Plus)) ==
               QScalar::q_power(-3) * QScalar::lambda() * QScalar::lambda() *
                   QScalar::lambda_plus());

    const QMatrix spectral = (r9 - id9) * (r9 - id9.scaled(q6)) * (r9 + id9.scaled(q4));
    record("spectral identity", spectral.is_zero());

    auto projs = projectors(true, params);
    auto find = [&](ProjectorKind k) -> const QMatrix& {
        for (auto& p : projs)
            if (p.kind == k) return p.matrix;
        throw rmatrix_error("missing projector");
    };
    const QMatrix& ps = find(ProjectorKind::PS);
    const QMatrix& pt = find(ProjectorKind::PT);
    const QMatrix& pa = find(ProjectorKind::PA);
    const QMatrix& pp = find(ProjectorKind::Pplus);
    const QMatrix& pm = find(ProjectorKind::Pminus);
    const QMatrix& p0 = find(ProjectorKind::Pa);

    const std::vector<const QMatrix*> all = {&ps, &pt, &pa, &pp, &pm, &p0};
    bool idem = true, orth = true;
    for (size_t i = 0; i < all.size(); ++i) {
        if (!((*all[i]) * (*all[i]) - *all[i]).is_zero()) idem = false;
        for (size_t j = 0; j < all.size(); ++j)
            if (i != j && !((*all[i]) * (*all[j])).is_zero()) orth = false;
    }
    record("projector idempotence", idem);
    record("projector orthogonality", orth);

    QMatrix sum = ps;
    for (size_t i = 1; i < all.size(); ++i) sum = sum + *all[i];
    record("projector completeness", (sum - QMatrix::identity(16)).is_zero());

    const QMatrix r16 = rhat(true, params);
    const QScalar rde = params.sqrt_de();
    const QMatrix decomp = ps + pt.scaled(q6) - pa.scaled(q4) + p0.scaled(params.a) +
                           pp.scaled(rde) - pm.scaled(rde);
    record("projector decomposition of R", (decomp - r16).is_zero());

    auto projs9 = projectors(false, params);
    const QMatrix d9 =
        projs9[0].matrix + projs9[1].matrix.scaled(q6) - projs9[2].matrix.scaled(q4);
    record("spatial decomposition entrywise", (d9 - r9).is_zero());

    QScalar gg;
    for (Idx e : {Idx::Plus, Idx::Three, Idx::Minus})
        for (Idx f : {Idx::Plus, Idx::Three, Idx::Minus})
            gg += metric_upper(e, f) * metric_lower(e, f);
    bool pt_ok = true;
    for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 9; ++c) {
            auto [a, b] = PairBasis::pair_at(r);
            auto [cc, dd] = PairBasis::pair_at(c);
            const QScalar expect = metric_upper(a, b) * metric_lower(cc, dd) / gg;
            if (!(projs9[1].matrix.at(r, c) == expect)) pt_ok = false;
        }
    }
    record("trace projector equals metric form", pt_ok);

    bool ginv = true;
    for (Idx a : {Idx::Plus, Idx::Three, Idx::Minus}) {
        for (Idx c : {Idx::Plus, Idx::Three, Idx::Minus}) {
            QScalar ssum;
            for (Idx b : {Idx::Plus, Idx::Three, Idx::Minus})
                ssum += metric_lower(a, b) * metric_upper(b, c);
            if (!(ssum == (a == c ? QScalar(1) : QScalar()))) ginv = false;
        }
    }
    record("metric inverse pair", ginv);

    record("R times R inverse is the identity",
           (r16 * rhat_inverse(true, params) - QMatrix::identity(16)).is_zero());
    record("(R - sqrt(de)) P+ annihilates",
           ((r16 - QMatrix::identity(16).scaled(rde)) * pp).is_zero());
    record("(R + sqrt(de)) P- annihilates",
           ((r16 + QMatrix::identity(16).scaled(rde)) * pm).is_zero());

    return out;
}

}  // namespace qspace
