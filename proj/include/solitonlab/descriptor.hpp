#pragma once

#include <stdexcept>
#include <string>

#include "solitonlab/catalog.hpp"

namespace solitonlab {

/// Parse failure for a .manifold descriptor; carries the source name
/// and 1-based line of the first offending construct.
struct DescriptorError : std::runtime_error {
  DescriptorError(std::string source, int line_no, const std::string& what_arg)
      : std::runtime_error(source + ":" + std::to_string(line_no) + ": " +
                           what_arg),
        source_name(std::move(source)),
        line(line_no) {}

  std::string source_name;
  int line = 0;
};

/// Parses a descriptor document.  Grammar (INI-like; '#' starts a
/// comment; values after '=' run to end of line so expressions need no
/// escaping):
///
///   [manifold]
///   name   = my-cone
///   kind   = metric | immersion | warped
///   coords = s, x2           # chart coordinate names, in order
///   lambda = 1               # optional; fitted when absent
///   margin = 0.05            # optional boundary margin fraction
///   concurrent = true        # optional (metric kind only)
///
///   [chart]                  # one "name = lo, hi" line per coordinate
///   s  = 0.1, 3.0
///   x2 = 0.5, 2.0
///
///   [metric]                 # kind = metric: lower-triangle suffices
///   g(s,s)   = 1
///   g(x2,x2) = s^2
///
///   [immersion]              # kind = immersion
///   ambient_dim = 3
///   origin = 0, 0, 0         # optional
///   y1 = cos(s) * x2         # components y1..y<m>, each required
///   ...
///
///   [warped]                 # kind = warped; coord 0 is s, the rest
///   f = s                    # are fiber coordinates
///   g(t0,t0) = 1             # fiber metric over the fiber coordinates
///
///   [potential]              # optional for kind = metric
///   v(s)  = s
///   v(x2) = 0
CatalogEntry parse_descriptor(const std::string& text,
                              const std::string& source_name);

CatalogEntry load_descriptor_file(const std::string& path);

}  // namespace solitonlab
