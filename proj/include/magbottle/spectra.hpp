#pragma once

#include "magbottle/gauge.hpp"
#include "magbottle/homology.hpp"
#include "magbottle/magnetic_laplacian.hpp"
#include "magbottle/surface.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace magbottle {

struct SolverOptions
{
    double tol = 1e-10;
    std::uint64_t seed = 42;
    /// Operator applications before giving up with NoConvergence.
    int max_iterations = 20000;
    /// Problems up to this dimension are diagonalized densely.
    int dense_threshold = 600;
    /// Run the Krylov iteration on (S + tau)^-1 through a sparse LDL^T factorization.
    bool shift_invert = true;
    bool want_vectors = false;
};

struct SpectrumResult
{
    std::vector<double> eigenvalues; // ascending
    /// ||S x - lambda x|| / (||x|| max(1, ||S||_inf)) per eigenpair.
    std::vector<double> residuals;
    ThetaPoint theta;
    std::int64_t chern = 0;
    double seconds = 0.0;
    std::string method;
    int iterations = 0;
    /// Eigenfunctions in original coordinates, unit norm in the mu inner product (on request).
    std::vector<std::vector<std::complex<double>>> vectors;
};

///
/// k smallest eigenvalues of h, each certified by its residual. Dense Hermitian
/// diagonalization up to options.dense_threshold, otherwise block Lanczos with full
/// reorthogonalization and Rayleigh-Ritz on the stored operator.
///
/// Throws Error(DimensionTooSmall) unless 1 <= k <= dim, Error(NoConvergence).
SpectrumResult lowest_eigenvalues(const MagneticLaplacian& h, int k, const SolverOptions& options = {});

/// All eigenvalues by dense diagonalization.
std::vector<double> dense_spectrum(const MagneticLaplacian& h);

struct Cluster
{
    double mean = 0.0;
    int multiplicity = 0;
    double spread = 0.0;
    int first = 0; // index of the first member
};

/// Splits sorted eigenvalues at gaps exceeding gap_factor times both neighbouring
/// gaps and the spread of the groups on either side (floor 1e-8 max(1, |lambda|)).
std::vector<Cluster> cluster_eigenvalues(std::span<const double> sorted, double gap_factor = 10.0);

struct SweepOptions
{
    WeightScheme scheme = WeightScheme::Unit;
    int k = 3;
    double scale = 1.0;
    SolverOptions solver;
    int jobs = 1;
};

struct SweepTable
{
    std::vector<int> resolution;
    std::vector<ThetaPoint> grid;
    std::vector<SpectrumResult> rows;
};

/// Uniform theta grid, theta_i = 2 pi m_i / resolution_i, in lexicographic index order
/// (first axis slowest).
std::vector<ThetaPoint> theta_grid(std::span<const int> resolution);

/// Spectra of the twisted operators over the flux torus. Grid points are independent
/// and may run concurrently; row order never depends on scheduling.
/// Throws NotQuantizable, Error(GenusZero).
SweepTable theta_sweep(
    const Mesh& mesh,
    const FluxAssignment& flux,
    const HomologyBasis& basis,
    std::span<const int> resolution,
    const SweepOptions& options = {});

enum class FluxProfile { UniformPerFace, AreaWeighted };

struct LadderRow
{
    std::int64_t chern = 0;
    SpectrumResult spectrum;
    std::vector<Cluster> clusters;
};

struct LadderOptions
{
    WeightScheme scheme = WeightScheme::Cotan;
    FluxProfile profile = FluxProfile::UniformPerFace;
    double scale = 1.0;
    SolverOptions solver;
};

/// Lowest k eigenvalues for total flux 2 pi c1, c1 in [c1_min, c1_max].
std::vector<LadderRow>
flux_ladder(const Mesh& mesh, std::int64_t c1_min, std::int64_t c1_max, int k, const LadderOptions& options = {});

/// Header theta_1..theta_2g,lambda_1..lambda_k,residual_max; 17 significant digits.
void write_sweep_csv(std::ostream& out, const SweepTable& table);
void write_sweep_json(std::ostream& out, const SweepTable& table);
void write_ladder_csv(std::ostream& out, const std::vector<LadderRow>& rows);
void write_ladder_json(std::ostream& out, const std::vector<LadderRow>& rows);

std::string format_double(double x);

} // namespace magbottle
