#ifndef TVPSV_DRAW_STORE_IO_HPP
#define TVPSV_DRAW_STORE_IO_HPP

#include <string>

#include <Eigen/Dense>

#include "tvpsv/sampler.hpp"

namespace tvpsv {

// Binary persistence for posterior draws: a magic tag and version, a JSON
// header describing the run and the array layout, then the arrays themselves
// as row-major little-endian doubles. Loading checks the tag and refuses
// files written by a newer version.
void save_draw_store(const DrawStore& store, const std::string& path);
DrawStore load_draw_store(const std::string& path);

// Same framing for a bare matrix (used for per-origin predictive locations).
void save_matrix(const Eigen::MatrixXd& m, const std::string& path);
Eigen::MatrixXd load_matrix(const std::string& path);

}  // namespace tvpsv

#endif
