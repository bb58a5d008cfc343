#ifndef CORPUS_LENS_CORPUS_LENS_HPP
#define CORPUS_LENS_CORPUS_LENS_HPP

#include "corpus_lens/chart.hpp"
#include "corpus_lens/corpus.hpp"
#include "corpus_lens/errors.hpp"
#include "corpus_lens/hash.hpp"
#include "corpus_lens/io.hpp"
#include "corpus_lens/mds.hpp"
#include "corpus_lens/network.hpp"
#include "corpus_lens/report.hpp"
#include "corpus_lens/sentiment.hpp"
#include "corpus_lens/stats.hpp"
#include "corpus_lens/tokenize.hpp"
#include "corpus_lens/toml.hpp"
#include "corpus_lens/utf8.hpp"

namespace corpus_lens {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
