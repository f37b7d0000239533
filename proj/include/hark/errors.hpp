#pragma once

#include <stdexcept>
#include <string>

namespace hark {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// audio_io
struct MalformedContainer : Error { using Error::Error; };
struct UnsupportedFormat : Error { using Error::Error; };
struct EmptyAudio : Error { using Error::Error; };

// dsp / features
struct ClipTooShort : Error { using Error::Error; };
struct DegenerateFilter : Error { using Error::Error; };
struct EmptyMatrix : Error { using Error::Error; };
struct TooFewSamples : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// classifiers
struct SingleClass : Error { using Error::Error; };

// model selection
struct ClassTooSmall : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct UnknownLabel : Error { using Error::Error; };

// dataset / io
struct ParseError : Error { using Error::Error; };
struct DuplicatePath : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };
struct AllClipsFailed : Error { using Error::Error; };

} // namespace hark
