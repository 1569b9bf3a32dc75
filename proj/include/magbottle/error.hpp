#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace magbottle {

enum class ErrorCode {
    LevelTooLarge,
    GridTooSmall,
    ResourceLimit,
    InvalidMesh,
    GenusZero,
    NotACycle,
    DegenerateForm,
    NotQuantizable,
    NotClosed,
    SingularPeriodMatrix,
    DimensionMismatch,
    CurvatureMismatch,
    DegenerateTriangle,
    MissingPhase,
    NoConvergence,
    DimensionTooSmall,
    InvalidArgument,
    IoError,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(detail)
        , m_code(code)
    {}

    ErrorCode code() const noexcept { return m_code; }

private:
    ErrorCode m_code;
};

/// Raised when a flux assignment violates Weyl integrality. Carries the
/// signed distance of the total flux from the nearest multiple of 2*pi.
class NotQuantizable : public Error
{
public:
    NotQuantizable(double total_flux, double defect);

    double total_flux() const noexcept { return m_total; }
    double defect() const noexcept { return m_defect; }

private:
    double m_total;
    double m_defect;
};

} // namespace magbottle
