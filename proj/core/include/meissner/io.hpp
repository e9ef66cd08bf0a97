#pragma once

#include <iosfwd>
#include <string>

#include "meissner/exterior.hpp"
#include "meissner/fields.hpp"
#include "meissner/interior.hpp"
#include "meissner/slab.hpp"

namespace meissner {

inline constexpr const char* kVersion = "0.1.0";

// Formats a double with full round-trip precision ("%.17g").
std::string format_double(double v);

// Field snapshot CSV: header `placement,axis,i,j,k,value`, axis -1 for
// scalars, LF line endings, '.' decimal.
void write_field_csv(std::ostream& os, const ScalarField& f);
void write_field_csv(std::ostream& os, const VectorField& f);
ScalarField read_scalar_field_csv(std::istream& is, const StaggeredGrid& grid,
                                  Placement placement);
VectorField read_vector_field_csv(std::istream& is, const StaggeredGrid& grid,
                                  Placement placement);

// Spectral coefficient table: `l,m,basis,value` with basis in {Y, GRAD_S, CROSS}.
void write_coeffs_csv(std::ostream& os, const SphericalHarmonicCoeffs& c);

// Slab profile CSV `x,f,a,fp,ap` and the summary JSON string.
void write_slab_profile_csv(std::ostream& os, const SlabSolution& sol);
std::string slab_summary_json(const SlabSolution& sol, double b);

// State sidecar: GLParameters, data norms and the solve report.
std::string state_sidecar_json(const MeissnerStateFH& state);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace meissner
