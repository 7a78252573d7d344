#pragma once

#include <stdexcept>
#include <string>

namespace scanguard {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define SCANGUARD_DEFINE_ERROR(NAME)                                  \
    class NAME : public Error {                                       \
    public:                                                           \
        explicit NAME(const std::string& msg) : Error(msg) {}         \
    }

SCANGUARD_DEFINE_ERROR(SeriesTooShort);
SCANGUARD_DEFINE_ERROR(NonPositivePrice);
SCANGUARD_DEFINE_ERROR(NonPositiveVolume);
SCANGUARD_DEFINE_ERROR(EmptySample);
SCANGUARD_DEFINE_ERROR(EmptyTraining);
SCANGUARD_DEFINE_ERROR(NonPositiveRatio);
SCANGUARD_DEFINE_ERROR(InsufficientTukeySamples);
SCANGUARD_DEFINE_ERROR(LengthMismatch);
SCANGUARD_DEFINE_ERROR(NumericalUnderflow);
SCANGUARD_DEFINE_ERROR(NonPositiveBandwidth);
SCANGUARD_DEFINE_ERROR(TooFewPoints);
SCANGUARD_DEFINE_ERROR(DegenerateVolumes);
SCANGUARD_DEFINE_ERROR(IndexMismatch);
SCANGUARD_DEFINE_ERROR(EmptyInput);
SCANGUARD_DEFINE_ERROR(MissingColumn);
SCANGUARD_DEFINE_ERROR(InsufficientWeeks);
SCANGUARD_DEFINE_ERROR(EmptySplit);
SCANGUARD_DEFINE_ERROR(InvalidConfig);

#undef SCANGUARD_DEFINE_ERROR

} // namespace scanguard
