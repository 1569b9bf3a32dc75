#pragma once

#include "magbottle/gauge.hpp"
#include "magbottle/surface.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace magbottle {

enum class WeightScheme { Unit, Cotan };

std::string_view scheme_name(WeightScheme scheme);

struct EdgeWeights
{
    WeightScheme scheme = WeightScheme::Unit;
    std::vector<double> w;

    bool has_negative() const;
};

/// Lumped vertex masses.
struct MassWeights
{
    std::vector<double> mu;
};

/// w_e = (cot alpha + cot beta) / 2 over the angles opposite e; mu_v = one third of
/// the incident face area. Throws Error(DegenerateTriangle).
std::pair<EdgeWeights, MassWeights> cotan_weights(const CombinatorialSurface& surface, const MeshMetric& metric);
std::pair<EdgeWeights, MassWeights> unit_weights(const CombinatorialSurface& surface);
std::pair<EdgeWeights, MassWeights>
make_weights(WeightScheme scheme, const CombinatorialSurface& surface, const MeshMetric& metric);

/// Compressed sparse rows, complex entries.
struct CsrMatrix
{
    int dim = 0;
    std::vector<int> row_start;
    std::vector<int> col;
    std::vector<std::complex<double>> val;

    void multiply(std::span<const std::complex<double>> x, std::span<std::complex<double>> y) const;
};

///
/// Discrete magnetic Laplacian on vertex functions,
///   (H psi)_v = (scale / mu_v) sum_{u ~ v} w_vu (psi_v - e^{i phi_vu} psi_u),
/// stored as the mu-symmetrized matrix S = mu^{1/2} H mu^{-1/2}, which is Hermitian
/// entry for entry. Eigenvectors x of S map to eigenfunctions psi = mu^{-1/2} x.
///
struct MagneticLaplacian
{
    int dim = 0;
    CsrMatrix symmetric;
    std::vector<double> mass;
    std::vector<Edge> edges;
    std::vector<double> weights;
    std::vector<double> phases;
    double scale = 1.0;

    WeightScheme scheme = WeightScheme::Unit;
    std::uint64_t flux_hash = 0;
    std::vector<double> theta;

    /// H psi in the original (unsymmetrized) coordinates.
    std::vector<std::complex<double>> apply(std::span<const std::complex<double>> psi) const;
};

/// Throws Error(MissingPhase) when the connection does not cover every edge.
MagneticLaplacian assemble(
    const CombinatorialSurface& surface,
    const EdgeWeights& weights,
    const MassWeights& mass,
    const Connection& conn,
    double scale = 1.0);

/// scale * sum_e w_e |psi_v - e^{i phi_vu} psi_u|^2, which equals <psi, H psi>_mu.
double quadratic_form(const MagneticLaplacian& h, std::span<const std::complex<double>> psi);

/// <psi, H psi>_mu evaluated through the stored matrix.
double matrix_quadratic_form(const MagneticLaplacian& h, std::span<const std::complex<double>> psi);

/// max |S_ij - conj(S_ji)| over stored entries.
double hermitian_defect(const MagneticLaplacian& h);

/// Coordinate text dump of S: "row col re im" per stored entry, 17 significant digits.
void write_coordinate(std::ostream& out, const MagneticLaplacian& h);

} // namespace magbottle
