#pragma once

#include <stdexcept>
#include <string>

namespace hballs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define HBALLS_ERROR(Name)                    \
    struct Name : Error {                     \
        using Error::Error;                   \
        Name() : Error(#Name) {}              \
    }

HBALLS_ERROR(DisconnectedDomain);
HBALLS_ERROR(GeometryOutOfBounds);
HBALLS_ERROR(GridMismatch);
HBALLS_ERROR(CenterOutsideRegion);
HBALLS_ERROR(CoincidentPoints);
HBALLS_ERROR(NonConvergence);
HBALLS_ERROR(SourceTooCloseToBoundary);
HBALLS_ERROR(SupportTouchesBoundary);
HBALLS_ERROR(BoxTooSmall);
HBALLS_ERROR(ProbeInsideBall);
HBALLS_ERROR(ProbeTooCloseToBoundary);
HBALLS_ERROR(IncomparableInputs);
HBALLS_ERROR(WrongDomainKind);
HBALLS_ERROR(DomainNotStarshaped);
HBALLS_ERROR(EmptyInterface);
HBALLS_ERROR(MarginTooSmall);
HBALLS_ERROR(ConfigError);

#undef HBALLS_ERROR

}  // namespace hballs
