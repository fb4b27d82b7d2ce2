#include "lattice_model.hpp"

namespace qhlat {

const char* model_kind_name(ModelKind kind) {
    switch (kind) {
    case ModelKind::FreeLaplacian: return "free";
    case ModelKind::PointDefect: return "point_defect";
    case ModelKind::TwoCenter: return "two_center";
    case ModelKind::MultiParam: return "multiparam";
    }
    return "?";
}

long LatticeModel::defect_half_width() const {
    switch (kind) {
    case ModelKind::FreeLaplacian:
        return 0;
    case ModelKind::PointDefect:
        return g.is_zero() ? 0 : 1;
    case ModelKind::TwoCenter:
        return g.is_zero() ? 0 : half_separation;
    case ModelKind::MultiParam: {
        long width = 0;
        for (std::size_t j = 0; j < params.size(); ++j)
            if (!params[j].is_zero())
                width = static_cast<long>(j) + 1;
        return width;
    }
    }
    return 0;
}

namespace {

BandMatrix<Rational> laplacian_matrix(long window) {
    BandMatrix<Rational> m(window);
    for (auto& v : m.ensure_diagonal(0))
        v = Rational(2);
    for (auto& v : m.ensure_diagonal(1))
        v = Rational(-1);
    for (auto& v : m.ensure_diagonal(-1))
        v = Rational(-1);
    return m;
}

// One defect bond between rows i and i+1: -p above the diagonal, +p below.
void add_bond(BandMatrix<Rational>& m, long i, const Rational& p) {
    m.set(i, i + 1, m.at(i, i + 1) - p);
    m.set(i + 1, i, m.at(i + 1, i) + p);
}

} // namespace

LatticeModel free_laplacian(long window) {
    if (window < 1)
        fail(ErrorCode::InvalidArgument, "free laplacian needs window >= 1");
    LatticeModel model;
    model.kind = ModelKind::FreeLaplacian;
    model.window = window;
    model.matrix = laplacian_matrix(window);
    return model;
}

LatticeModel point_defect(const Rational& g, long window) {
    if (window < 2)
        fail(ErrorCode::InvalidArgument, "point defect needs window >= 2");
    LatticeModel model;
    model.kind = ModelKind::PointDefect;
    model.g = g;
    model.window = window;
    model.matrix = laplacian_matrix(window);
    // Bonds touching site 0: entries toward column 0 are -1-g, away -1+g.
    add_bond(model.matrix, -1, g);
    add_bond(model.matrix, 0, -g);
    return model;
}

LatticeModel two_center(const Rational& g, int m_sep, long window) {
    if (m_sep < 1)
        fail(ErrorCode::InvalidArgument, "two-center separation parameter must be >= 1");
    if (window < m_sep + 1)
        fail(ErrorCode::WindowMismatch, "window too small to contain both defect bonds");
    LatticeModel model;
    model.kind = ModelKind::TwoCenter;
    model.g = g;
    model.half_separation = m_sep;
    model.window = window;
    model.matrix = laplacian_matrix(window);
    // Left bond couples sites (-M,-M+1), right bond (M-1,M); for M = 1 the two
    // bonds overlap at the center and reproduce the single-defect model.
    add_bond(model.matrix, -m_sep, g);
    add_bond(model.matrix, m_sep - 1, -g);
    return model;
}

LatticeModel multiparam(const std::vector<Rational>& params, long window) {
    if (params.empty())
        fail(ErrorCode::InvalidArgument, "multiparam model needs at least one coupling");
    const long m = static_cast<long>(params.size());
    if (window < m + 1)
        fail(ErrorCode::WindowMismatch, "window too small for the outermost coupling");
    LatticeModel model;
    model.kind = ModelKind::MultiParam;
    model.params = params;
    model.window = window;
    model.matrix = laplacian_matrix(window);
    // Central bond (sites -1,1) carries p_1; the bond pair at distance j from
    // the center carries p_{j+1}. Internal indices: site 2i+1 <-> index i.
    add_bond(model.matrix, -1, params[0]);
    for (long j = 1; j < m; ++j) {
        add_bond(model.matrix, -j - 1, params[static_cast<std::size_t>(j)]);
        add_bond(model.matrix, j - 1, params[static_cast<std::size_t>(j)]);
    }
    return model;
}

} // namespace qhlat
