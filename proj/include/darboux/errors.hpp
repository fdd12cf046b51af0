#ifndef DARBOUX_ERRORS_HPP
#define DARBOUX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace darboux {

struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

#define DARBOUX_DEFINE_ERROR(name)                                        \
    struct name : error {                                                 \
        explicit name(const std::string& what) : error(#name ": " + what) {} \
    }

DARBOUX_DEFINE_ERROR(DegenerateMetric);
DARBOUX_DEFINE_ERROR(RegularityBudgetExceeded);
DARBOUX_DEFINE_ERROR(TaylorSolveSingular);
DARBOUX_DEFINE_ERROR(CharacteristicBlowup);
DARBOUX_DEFINE_ERROR(QuadratureFailure);
DARBOUX_DEFINE_ERROR(StencilUnderflow);
DARBOUX_DEFINE_ERROR(TipSupportViolation);
DARBOUX_DEFINE_ERROR(EllipticityLost);
DARBOUX_DEFINE_ERROR(SolverSingular);
DARBOUX_DEFINE_ERROR(ResidualTooLarge);
DARBOUX_DEFINE_ERROR(CharacteristicSurface);
DARBOUX_DEFINE_ERROR(EnergyBlowup);
DARBOUX_DEFINE_ERROR(LinearSolveFailed);
DARBOUX_DEFINE_ERROR(DivergenceDetected);
DARBOUX_DEFINE_ERROR(GlueMismatch);
DARBOUX_DEFINE_ERROR(NotFlat);
DARBOUX_DEFINE_ERROR(MetricLoss);
DARBOUX_DEFINE_ERROR(ConfigParseError);

#undef DARBOUX_DEFINE_ERROR

} // namespace darboux

#endif
