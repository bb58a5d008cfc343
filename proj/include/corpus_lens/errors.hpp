#ifndef CORPUS_LENS_ERRORS_HPP
#define CORPUS_LENS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace corpus_lens {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// corpus
struct EmptyCorpus : Error { using Error::Error; };
struct EncodingError : Error { using Error::Error; };
struct DuplicateChapterIndex : Error { using Error::Error; };

// tokenize
struct AlignmentError : Error { using Error::Error; };
struct MalformedRecord : Error { using Error::Error; };

// stats
struct EmptyDocument : Error { using Error::Error; };
struct UnknownTerm : Error { using Error::Error; };

// sentiment
struct EmptyLexicon : Error { using Error::Error; };
struct NoScoredSentences : Error { using Error::Error; };

// network
struct UnsupportedFormat : Error { using Error::Error; };

// mds
struct NonConvergence : Error { using Error::Error; };

// report
struct EmptySeries : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

/// Violated precondition (bad argument from caller code, not from data).
struct InvalidArgument : Error { using Error::Error; };

/// File-system / stream failure with path context.
struct IoError : Error { using Error::Error; };

/// Wraps any stage error raised inside run_pipeline with the stage name.
struct PipelineError : Error {
    PipelineError(const std::string& stage, const std::string& what)
        : Error(stage + ": " + what), stage_(stage) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace corpus_lens

#endif
