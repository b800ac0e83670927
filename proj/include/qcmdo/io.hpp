#pragma once

#include <string>
#include <vector>

#include "qcmdo/annealer.hpp"
#include "qcmdo/encoding.hpp"
#include "qcmdo/problem_model.hpp"

namespace qcmdo::io {

/// Problem document: an object with n, m, A, b, c, F, d and domains.
/// Complex entries are [re, im] pairs; matrices are arrays of rows; a domain
/// is "continuous" or {"discrete": [[re, im], ...]}.  Parsing does not
/// validate; the caller runs validate() on the result.
QcmdoProblem parse_problem(const std::string& text);
std::string format_problem(const QcmdoProblem& problem);

/// A QUBO text file.  `comments` holds the free comment lines (without the
/// leading "c"), the offset travels in a trailing `c offset <k>` line.
struct QuboFile {
    QuboProblem qubo;
    std::vector<std::string> comments;
};

/// Accepts comment lines anywhere; off-diagonal values are M_ij + M_ji.
QuboFile parse_qubo(const std::string& text);
std::string format_qubo(const QuboProblem& qubo, const std::vector<std::string>& comments = {});

/// Encodings sidecar (JSON) carrying the decode maps and any penalty.
std::string format_encodings(const QuboProblem& qubo);
/// Installs the sidecar's encodings into `qubo`; throws ParseError when the
/// bit counts disagree with qubo.p().
void parse_encodings(const std::string& text, QuboProblem& qubo);

/// Header `w,E0,E1,gap`, one row per sample.
std::string gap_csv(const GapSweep& sweep);

/// `N=<N>` and `true_s=<bits>` lines.
std::string format_labels(int N, const Bits& true_s);

std::string read_file(const std::string& path);
/// Writes through a temporary file in the same directory and renames it
/// into place.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace qcmdo::io
