#include "magbottle/spectra.hpp"

#include "magbottle/angles.hpp"
#include "magbottle/error.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

namespace magbottle {

namespace {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

double inf_norm(const CsrMatrix& s)
{
    double best = 0.0;
    for (int r = 0; r < s.dim; ++r) {
        double row = 0.0;
        for (int k = s.row_start[static_cast<std::size_t>(r)]; k < s.row_start[static_cast<std::size_t>(r) + 1]; ++k)
            row += std::abs(s.val[static_cast<std::size_t>(k)]);
        best = std::max(best, row);
    }
    return best;
}

// Lower bound on the spectrum from Gershgorin discs.
double gershgorin_lower(const CsrMatrix& s)
{
    double low = std::numeric_limits<double>::infinity();
    for (int r = 0; r < s.dim; ++r) {
        double center = 0.0, radius = 0.0;
        for (int k = s.row_start[static_cast<std::size_t>(r)]; k < s.row_start[static_cast<std::size_t>(r) + 1]; ++k) {
            if (s.col[static_cast<std::size_t>(k)] == r)
                center += s.val[static_cast<std::size_t>(k)].real();
            else
                radius += std::abs(s.val[static_cast<std::size_t>(k)]);
        }
        low = std::min(low, center - radius);
    }
    return low;
}

void multiply(const CsrMatrix& s, const Mat& x, Mat& y)
{
    y.resize(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        s.multiply(
            std::span<const Complex>(x.col(j).data(), static_cast<std::size_t>(x.rows())),
            std::span<Complex>(y.col(j).data(), static_cast<std::size_t>(y.rows())));
    }
}

Eigen::SparseMatrix<Complex> to_sparse(const CsrMatrix& s, double shift)
{
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(s.val.size());
    for (int r = 0; r < s.dim; ++r)
        for (int k = s.row_start[static_cast<std::size_t>(r)]; k < s.row_start[static_cast<std::size_t>(r) + 1]; ++k) {
            int c = s.col[static_cast<std::size_t>(k)];
            Complex v = s.val[static_cast<std::size_t>(k)];
            if (c == r) v += shift;
            trip.emplace_back(r, c, v);
        }
    Eigen::SparseMatrix<Complex> m(s.dim, s.dim);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

void fill_vectors(const MagneticLaplacian& h, const Mat& x, SpectrumResult& out)
{
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        std::vector<Complex> psi(static_cast<std::size_t>(h.dim));
        double norm = x.col(j).norm();
        for (int v = 0; v < h.dim; ++v) {
            psi[static_cast<std::size_t>(v)] = x(v, j) / (norm * std::sqrt(h.mass[static_cast<std::size_t>(v)]));
        }
        out.vectors.push_back(std::move(psi));
    }
}

Mat dense_matrix(const CsrMatrix& s)
{
    Mat a = Mat::Zero(s.dim, s.dim);
    for (int r = 0; r < s.dim; ++r)
        for (int k = s.row_start[static_cast<std::size_t>(r)]; k < s.row_start[static_cast<std::size_t>(r) + 1]; ++k)
            a(r, s.col[static_cast<std::size_t>(k)]) = s.val[static_cast<std::size_t>(k)];
    return a;
}

SpectrumResult dense_solve(const MagneticLaplacian& h, int k, const SolverOptions& options)
{
    Mat a = dense_matrix(h.symmetric);
    Eigen::SelfAdjointEigenSolver<Mat> eig(a);
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense Hermitian eigensolver failed");
    const double scale = std::max(1.0, inf_norm(h.symmetric));
    SpectrumResult out;
    out.method = "dense";
    Mat x = eig.eigenvectors().leftCols(k);
    Mat ax = a * x;
    for (int j = 0; j < k; ++j) {
        double lambda = eig.eigenvalues()(j);
        out.eigenvalues.push_back(lambda);
        out.residuals.push_back((ax.col(j) - lambda * x.col(j)).norm() / scale);
    }
    if (options.want_vectors) fill_vectors(h, x, out);
    return out;
}

Mat random_block(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat b(n, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < n; ++i) b(i, j) = Complex(normal(rng), normal(rng));
    return b;
}

// Orthonormalizes `block` against the columns of `basis` and itself (two passes of
// classical Gram-Schmidt); columns that collapse are dropped.
Mat orthonormal_extension(const Mat& basis, Mat block)
{
    Mat accepted(block.rows(), 0);
    for (Eigen::Index j = 0; j < block.cols(); ++j) {
        Eigen::VectorXcd v = block.col(j);
        double original = v.norm();
        if (original == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass) {
            if (basis.cols() > 0) v -= basis * (basis.adjoint() * v);
            if (accepted.cols() > 0) v -= accepted * (accepted.adjoint() * v);
        }
        double norm = v.norm();
        if (norm <= 1e-10 * original) continue;
        accepted.conservativeResize(Eigen::NoChange, accepted.cols() + 1);
        accepted.col(accepted.cols() - 1) = v / norm;
    }
    return accepted;
}

SpectrumResult lanczos_solve(const MagneticLaplacian& h, int k, const SolverOptions& options)
{
    const CsrMatrix& s = h.symmetric;
    const Eigen::Index n = s.dim;
    const double norm_est = inf_norm(s);
    const double threshold = options.tol * std::max(1.0, norm_est);

    // Spectral transformation: the lowest eigenvalues of S become the dominant ones.
    std::function<Mat(const Mat&)> op;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<Complex>, Eigen::Lower> ldlt;
    std::string method = "lanczos";
    bool have_factor = false;
    if (options.shift_invert) {
        const double low = gershgorin_lower(s);
        bool psd = std::all_of(h.weights.begin(), h.weights.end(), [](double w) { return w >= 0.0; }) && h.scale >= 0.0;
        double tau = 1e-6 * std::max(1.0, norm_est);
        if (!psd && low < 0.0) tau += -low;
        ldlt.compute(to_sparse(s, tau));
        if (ldlt.info() == Eigen::Success) {
            have_factor = true;
            method = "lanczos-shift-invert";
            op = [&ldlt](const Mat& x) -> Mat { return ldlt.solve(x); };
        }
    }
    if (!have_factor) {
        const double sigma = norm_est;
        op = [&s, sigma](const Mat& x) -> Mat {
            Mat y;
            multiply(s, x, y);
            return sigma * x - y;
        };
    }

    const Eigen::Index p = std::min<Eigen::Index>(n, std::max(k, 2));
    const Eigen::Index max_basis = std::min<Eigen::Index>(n, std::max<Eigen::Index>(10 * p, 60));
    const Eigen::Index keep = std::min<Eigen::Index>(max_basis - p, k + p);

    std::mt19937_64 rng(options.seed);
    Mat basis(n, 0);
    Mat s_basis(n, 0);
    Mat block = random_block(rng, n, p);
    int applications = 0;

    while (true) {
        Mat fresh = orthonormal_extension(basis, block);
        if (fresh.cols() == 0 && basis.cols() < n) {
            fresh = orthonormal_extension(basis, random_block(rng, n, std::min<Eigen::Index>(p, n - basis.cols())));
        }
        Mat s_fresh;
        multiply(s, fresh, s_fresh);
        const Eigen::Index old_cols = basis.cols();
        basis.conservativeResize(Eigen::NoChange, old_cols + fresh.cols());
        basis.rightCols(fresh.cols()) = fresh;
        s_basis.conservativeResize(Eigen::NoChange, old_cols + fresh.cols());
        s_basis.rightCols(fresh.cols()) = s_fresh;

        Mat t = basis.adjoint() * s_basis;
        t = 0.5 * (t + t.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> ritz(t);
        const Eigen::Index wanted = std::min<Eigen::Index>(k, basis.cols());
        Mat y = ritz.eigenvectors().leftCols(wanted);
        Mat x = basis * y;
        Mat sx = s_basis * y;
        bool converged = wanted == k;
        std::vector<double> res(static_cast<std::size_t>(wanted));
        for (Eigen::Index j = 0; j < wanted; ++j) {
            res[static_cast<std::size_t>(j)] = (sx.col(j) - ritz.eigenvalues()(j) * x.col(j)).norm();
            if (res[static_cast<std::size_t>(j)] > threshold) converged = false;
        }
        if (converged || basis.cols() == n) {
            SpectrumResult out;
            out.method = method;
            out.iterations = applications;
            for (Eigen::Index j = 0; j < wanted; ++j) {
                out.eigenvalues.push_back(ritz.eigenvalues()(j));
                out.residuals.push_back(res[static_cast<std::size_t>(j)] / std::max(1.0, norm_est));
            }
            if (options.want_vectors) fill_vectors(h, x, out);
            return out;
        }
        if (applications >= options.max_iterations) {
            throw Error(
                ErrorCode::NoConvergence,
                "Lanczos did not reach tolerance " + format_double(options.tol) + " after " +
                    std::to_string(applications) + " operator applications");
        }

        Mat last;
        if (basis.cols() + p > max_basis) {
            // Thick restart on the lowest Ritz vectors.
            Mat z = ritz.eigenvectors().leftCols(keep);
            basis = (basis * z).eval();
            s_basis = (s_basis * z).eval();
            last = basis.leftCols(std::min(p, keep));
        } else {
            last = basis.rightCols(fresh.cols());
        }
        block = op(last);
        applications += static_cast<int>(last.cols());
    }
}

} // namespace

SpectrumResult lowest_eigenvalues(const MagneticLaplacian& h, int k, const SolverOptions& options)
{
    if (h.dim < 1 || k < 1 || k > h.dim) {
        throw Error(
            ErrorCode::DimensionTooSmall,
            "requested " + std::to_string(k) + " eigenvalues of a " + std::to_string(h.dim) + "-dimensional operator");
    }
    if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    auto start = std::chrono::steady_clock::now();
    SpectrumResult out = h.dim <= options.dense_threshold ? dense_solve(h, k, options) : lanczos_solve(h, k, options);
    out.theta.theta = h.theta;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::vector<double> dense_spectrum(const MagneticLaplacian& h)
{
    Eigen::SelfAdjointEigenSolver<Mat> eig(dense_matrix(h.symmetric), Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense Hermitian eigensolver failed");
    return {eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size()};
}

std::vector<Cluster> cluster_eigenvalues(std::span<const double> sorted, double gap_factor)
{
    std::vector<Cluster> out;
    const std::size_t n = sorted.size();
    if (n == 0) return out;
    auto floor_at = [](double x) { return 1e-8 * std::max(1.0, std::abs(x)); };
    auto gap = [&](std::size_t i) { return sorted[i + 1] - sorted[i]; };

    // Candidate cuts dominate both neighbouring gaps.
    std::vector<char> cut(n > 1 ? n - 1 : 0, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double neighbour = floor_at(sorted[i + 1]);
        if (i > 0) neighbour = std::max(neighbour, gap(i - 1));
        if (i + 2 < n) neighbour = std::max(neighbour, gap(i + 1));
        cut[i] = gap(i) > gap_factor * neighbour;
    }
    // Keep a cut only if it beats the spread of the groups on both sides.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < cut.size(); ++i) {
            if (!cut[i]) continue;
            std::size_t lo = i, hi = i + 1;
            while (lo > 0 && !cut[lo - 1]) --lo;
            while (hi + 1 < n && !cut[hi]) ++hi;
            double spread = std::max({sorted[i] - sorted[lo], sorted[hi] - sorted[i + 1], floor_at(sorted[i + 1])});
            if (!(gap(i) > gap_factor * spread)) {
                cut[i] = 0;
                changed = true;
            }
        }
    }
    std::size_t first = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 < n && !cut[i]) continue;
        Cluster c;
        c.first = static_cast<int>(first);
        c.multiplicity = static_cast<int>(i + 1 - first);
        c.spread = sorted[i] - sorted[first];
        double sum = 0.0;
        for (std::size_t j = first; j <= i; ++j) sum += sorted[j];
        c.mean = sum / static_cast<double>(c.multiplicity);
        out.push_back(c);
        first = i + 1;
    }
    return out;
}

std::vector<ThetaPoint> theta_grid(std::span<const int> resolution)
{
    for (int r : resolution)
        if (r < 1) throw Error(ErrorCode::InvalidArgument, "grid resolution must be positive");
    std::vector<ThetaPoint> grid;
    std::vector<int> idx(resolution.size(), 0);
    std::size_t total = 1;
    for (int r : resolution) total *= static_cast<std::size_t>(r);
    for (std::size_t n = 0; n < total; ++n) {
        ThetaPoint t;
        for (std::size_t a = 0; a < resolution.size(); ++a) t.theta.push_back(kTwoPi * idx[a] / resolution[a]);
        grid.push_back(std::move(t));
        for (std::size_t a = resolution.size(); a-- > 0;) {
            if (++idx[a] < resolution[a]) break;
            idx[a] = 0;
        }
    }
    return grid;
}

SweepTable theta_sweep(
    const Mesh& mesh,
    const FluxAssignment& flux,
    const HomologyBasis& basis,
    std::span<const int> resolution,
    const SweepOptions& options)
{
    const CombinatorialSurface& surface = mesh.surface;
    if (surface.genus() == 0) throw Error(ErrorCode::GenusZero, "flux torus of a sphere is a single point");
    if (resolution.size() != basis.cycles.size()) {
        throw Error(ErrorCode::DimensionMismatch, "grid needs one resolution per homology generator");
    }
    const std::int64_t chern = check_weyl(surface, flux);
    const Connection base = build_connection(surface, flux);
    const TwistCocycles cocycles = build_twist_cocycles(surface, basis);
    const auto [weights, mass] = make_weights(options.scheme, surface, mesh.metric);

    SweepTable table;
    table.resolution.assign(resolution.begin(), resolution.end());
    table.grid = theta_grid(resolution);
    table.rows.resize(table.grid.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= table.grid.size()) return;
            try {
                Connection conn = twist_connection(base, table.grid[i], cocycles);
                MagneticLaplacian h = assemble(surface, weights, mass, conn, options.scale);
                h.theta = table.grid[i].theta;
                SpectrumResult r = lowest_eigenvalues(h, options.k, options.solver);
                r.chern = chern;
                table.rows[i] = std::move(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_lock);
                if (!failure) failure = std::current_exception();
                next = table.grid.size();
                return;
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(table.grid.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return table;
}

std::vector<LadderRow>
flux_ladder(const Mesh& mesh, std::int64_t c1_min, std::int64_t c1_max, int k, const LadderOptions& options)
{
    if (c1_max < c1_min) throw Error(ErrorCode::InvalidArgument, "empty Chern range");
    const auto [weights, mass] = make_weights(options.scheme, mesh.surface, mesh.metric);
    std::vector<LadderRow> rows;
    for (std::int64_t c = c1_min; c <= c1_max; ++c) {
        const double total = kTwoPi * static_cast<double>(c);
        FluxAssignment flux = options.profile == FluxProfile::AreaWeighted
                                  ? FluxAssignment::area_weighted(mesh.surface, mesh.metric, total)
                                  : FluxAssignment::uniform(mesh.surface, total);
        LadderRow row;
        row.chern = check_weyl(mesh.surface, flux);
        Connection conn = build_connection(mesh.surface, flux);
        MagneticLaplacian h = assemble(mesh.surface, weights, mass, conn, options.scale);
        row.spectrum = lowest_eigenvalues(h, k, options.solver);
        row.spectrum.chern = row.chern;
        row.clusters = cluster_eigenvalues(row.spectrum.eigenvalues);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table)
{
    const std::size_t dims = table.resolution.size();
    const std::size_t k = table.rows.empty() ? 0 : table.rows.front().eigenvalues.size();
    for (std::size_t a = 0; a < dims; ++a) out << "theta_" << a + 1 << ',';
    for (std::size_t j = 0; j < k; ++j) out << "lambda_" << j + 1 << ',';
    out << "residual_max\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (double t : table.grid[i].theta) out << format_double(t) << ',';
        for (double l : table.rows[i].eigenvalues) out << format_double(l) << ',';
        double worst = 0.0;
        for (double r : table.rows[i].residuals) worst = std::max(worst, r);
        out << format_double(worst) << '\n';
    }
}

namespace {

void write_array(std::ostream& out, std::span<const double> xs)
{
    out << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << format_double(xs[i]);
    out << ']';
}

} // namespace

void write_sweep_json(std::ostream& out, const SweepTable& table)
{
    out << "{\"resolution\":[";
    for (std::size_t a = 0; a < table.resolution.size(); ++a) out << (a ? "," : "") << table.resolution[a];
    out << "],\"rows\":[";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        double worst = 0.0;
        for (double x : r.residuals) worst = std::max(worst, x);
        out << (i ? "," : "") << "\n{\"theta\":";
        write_array(out, table.grid[i].theta);
        out << ",\"eigenvalues\":";
        write_array(out, r.eigenvalues);
        out << ",\"residual_max\":" << format_double(worst) << ",\"chern\":" << r.chern << '}';
    }
    out << "\n]}\n";
}

void write_ladder_csv(std::ostream& out, const std::vector<LadderRow>& rows)
{
    const std::size_t k = rows.empty() ? 0 : rows.front().spectrum.eigenvalues.size();
    out << "chern,";
    for (std::size_t j = 0; j < k; ++j) out << "lambda_" << j + 1 << ',';
    out << "lowest_cluster_mean,lowest_cluster_multiplicity,residual_max\n";
    for (const auto& row : rows) {
        out << row.chern << ',';
        for (double l : row.spectrum.eigenvalues) out << format_double(l) << ',';
        double worst = 0.0;
        for (double r : row.spectrum.residuals) worst = std::max(worst, r);
        const Cluster lowest = row.clusters.empty() ? Cluster{} : row.clusters.front();
        out << format_double(lowest.mean) << ',' << lowest.multiplicity << ',' << format_double(worst) << '\n';
    }
}

void write_ladder_json(std::ostream& out, const std::vector<LadderRow>& rows)
{
    out << "{\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        out << (i ? "," : "") << "\n{\"chern\":" << row.chern << ",\"eigenvalues\":";
        write_array(out, row.spectrum.eigenvalues);
        out << ",\"clusters\":[";
        for (std::size_t c = 0; c < row.clusters.size(); ++c) {
            out << (c ? "," : "") << "{\"mean\":" << format_double(row.clusters[c].mean)
                << ",\"multiplicity\":" << row.clusters[c].multiplicity
                << ",\"spread\":" << format_double(row.clusters[c].spread) << '}';
        }
        out << "]}";
    }
    out << "\n]}\n";
}

} // namespace magbottle
