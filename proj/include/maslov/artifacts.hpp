#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "maslov/winding.hpp"

namespace maslov {

std::string format_double(double v);

// param,omega1,omega2,psi1,psi2,rho with omega rebuilt from the stored log scale.
std::string shelf_csv(const PathSamples& path);

struct Segment {
  double x0, y0, x1, y1;
};

// Zero contour of f sampled at (cols[j], rows[i]); coordinates are (col, row).
std::vector<Segment> marching_squares(const Eigen::MatrixXd& f, const std::vector<double>& rows,
                                      const std::vector<double>& cols);

struct Marker {
  double lambda, x;
  std::string color;
  std::string label;
};

// Lambda horizontal, x vertical (x = 0 at the bottom).
std::string box_svg(double lambda1, double lambda2, const std::vector<Segment>& curve,
                    const std::vector<Marker>& markers, const std::string& title);

std::string heatmap_svg(const Eigen::MatrixXd& rho, const std::vector<double>& xs,
                        const std::vector<double>& lambdas, const std::vector<Marker>& markers,
                        const std::string& title);

void write_file(const std::string& path, const std::string& content);

}  // namespace maslov
