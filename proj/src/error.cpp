#include "magbottle/error.hpp"

#include <cstdio>

namespace magbottle {

std::string_view error_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::LevelTooLarge: return "LevelTooLarge";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::InvalidMesh: return "InvalidMesh";
    case ErrorCode::GenusZero: return "GenusZero";
    case ErrorCode::NotACycle: return "NotACycle";
    case ErrorCode::DegenerateForm: return "DegenerateForm";
    case ErrorCode::NotQuantizable: return "NotQuantizable";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::SingularPeriodMatrix: return "SingularPeriodMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CurvatureMismatch: return "CurvatureMismatch";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::MissingPhase: return "MissingPhase";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

namespace {

std::string describe(double total, double defect)
{
    char buf[128];
    std::snprintf(buf, sizeof(buf), "total flux %.17g misses 2*pi*Z by %.17g", total, defect);
    return buf;
}

} // namespace

NotQuantizable::NotQuantizable(double total_flux, double defect)
    : Error(ErrorCode::NotQuantizable, describe(total_flux, defect))
    , m_total(total_flux)
    , m_defect(defect)
{}

} // namespace magbottle
