#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rotormesh/config.hpp"
#include "rotormesh/csv.hpp"
#include "rotormesh/exec.hpp"
#include "rotormesh/hb_operator.hpp"
#include "rotormesh/interface.hpp"
#include "rotormesh/kinematics.hpp"
#include "rotormesh/mesh_io.hpp"
#include "rotormesh/quality.hpp"
#include "rotormesh/rotor_cycle.hpp"

namespace rotormesh::cli {
namespace {

namespace fs = std::filesystem;

struct InfoArgs {
  std::string mesh;
};

struct SweepArgs {
  std::string config;
  std::vector<double> stations{1.0};
  int steps = 360;
  std::string out;
};

struct DeformArgs {
  std::string mesh;
  std::string config;
  std::vector<std::string> blade_markers{"blade"};
  int steps_per_rev = 360;
  double revolutions = 5.0;
  int stride = 1;
  std::string out = "deform_out";
  std::string frame = "fixed";
};

struct InterfaceArgs {
  std::string mesh;
  std::vector<std::string> markers;
  std::string config;
  std::string out;
};

struct HbArgs {
  std::vector<double> omega;
  int instances = 0;
  std::optional<double> probe_multiple;
  std::string out;
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

int cmd_info(const InfoArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<Mesh> mesh;
  try {
    mesh = read_mesh_file(a.mesh);
  } catch (const std::exception& e) {
    err << "error: " << a.mesh << ": " << e.what() << '\n';
    return kInput;
  }
  const QualityReport q = orthogonality_metrics(*mesh);
  out << fmt::format("mesh: {}\n", a.mesh);
  out << fmt::format("dimension: {}\n", mesh->dim());
  out << fmt::format("{} elements, {} points, min orthogonality {:.1f}°\n", mesh->element_count(),
                     mesh->point_count(), q.min_orthogonality_deg);
  out << fmt::format("min_orthogonality_deg={}\n", format_number(q.min_orthogonality_deg));
  out << fmt::format("negative_volume_count={}\n", q.negative_volume_count);
  out << fmt::format("min_volume={}\n", format_number(q.min_volume));
  out << fmt::format("markers: {}\n", mesh->markers().size());
  for (const auto& m : mesh->markers()) {
    out << fmt::format("  {:<20} {:>8} faces {:>8} points\n", m.name, m.faces.size(),
                       extract_marker_points(*mesh, m.name).indices.size());
  }
  return kOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  if (a.steps < 1) {
    err << "error: --steps must be at least 1\n";
    return kUsage;
  }
  std::optional<RunConfigFile> cfg;
  try {
    cfg = load_config(a.config);
  } catch (const std::exception& e) {
    err << "error: " << a.config << ": " << e.what() << '\n';
    return kInput;
  }
  const BladeMotion motion = cfg->blade_motion(0);
  CsvWriter csv({"psi_deg", "r_over_R", "beta_deg", "delta_deg", "theta_deg", "mach_n"});
  try {
    for (int k = 0; k < a.steps; ++k) {
      const double psi_deg = 360.0 * k / a.steps;
      const double psi = deg_to_rad(psi_deg);
      const HingeAngles ang = motion.angles(psi);
      for (double r : a.stations) {
        csv.row(psi_deg, r, rad_to_deg(ang.flap), rad_to_deg(ang.leadlag), rad_to_deg(ang.pitch),
                blade_normal_mach(r, cfg->flight, psi));
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  emit(a.out, csv.str(), out);
  return kOk;
}

int cmd_deform(const DeformArgs& a, std::ostream& out, std::ostream& err) {
  if (a.steps_per_rev < 1 || a.revolutions < 0.0 || a.stride < 0) {
    err << "error: need --steps-per-rev >= 1, --revolutions >= 0 and --stride >= 0\n";
    return kUsage;
  }
  if (a.frame != "fixed" && a.frame != "hub") {
    err << "error: --frame must be 'fixed' or 'hub'\n";
    return kUsage;
  }
  std::optional<Mesh> mesh;
  std::optional<RunConfigFile> cfg;
  try {
    mesh = read_mesh_file(a.mesh);
    cfg = load_config(a.config);
    for (const auto& m : a.blade_markers) (void)mesh->marker(m);
    for (const auto& m : cfg->rbf.fixed_markers) (void)mesh->marker(m);
    (void)cfg->greedy_options();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  }

  const fs::path dir(a.out);
  fs::create_directories(dir);
  CycleOptions opt;
  opt.steps_per_rev = a.steps_per_rev;
  opt.revolutions = a.revolutions;
  opt.blade_markers = a.blade_markers;
  opt.frame = a.frame == "hub" ? Frame::hub : Frame::fixed;

  CsvWriter quality({"step", "time_s", "psi_deg", "min_orthogonality_deg", "negative_volume_count",
                     "min_volume", "control_points", "greedy_max_err", "velocity_order"});
  CsvWriter greedy({"step", "level", "points", "max_err", "mean_err", "seconds"});
  const auto& ref_pts = mesh->points();

  auto on_step = [&](const CycleStep& s) {
    const GreedyHistory& h = *s.history;
    const std::size_t points = h.levels.empty() ? 0 : h.levels.back().points;
    const double max_err = h.levels.empty() ? 0.0 : h.levels.back().max_error;
    quality.row(s.step, s.time, s.azimuth_deg, s.quality.min_orthogonality_deg,
                s.quality.negative_volume_count, s.quality.min_volume, points, max_err,
                s.velocity_order);
    for (const auto& l : h.levels) {
      greedy.row(s.step, l.level, l.points, l.max_error, l.mean_error, l.seconds);
    }
    if (a.stride > 0 && s.step % a.stride == 0) {
      std::vector<Vec3> disp(ref_pts.size());
      for (std::size_t i = 0; i < disp.size(); ++i) disp[i] = s.mesh->points()[i] - ref_pts[i];
      const std::vector<PointField> fields{{"grid_velocity", *s.grid_velocity},
                                           {"displacement", std::move(disp)}};
      write_text_file(dir / fmt::format("step_{:05d}.vtk", s.step),
                      write_vtk(*s.mesh, fields, fmt::format("step {} t={}", s.step, s.time)));
    }
  };

  CycleResult r;
  try {
    r = run_rotor_cycle(*mesh, *cfg, opt, on_step);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDeformFailure;
  }
  write_text_file(dir / "quality.csv", quality.str());
  write_text_file(dir / "greedy.csv", greedy.str());

  double min_orth = 90.0;
  for (const auto& q : r.quality) min_orth = std::min(min_orth, q.min_orthogonality_deg);
  std::string meta;
  meta += fmt::format("mesh={}\nconfig={}\n", a.mesh, a.config);
  meta += fmt::format("frame={}\nsteps_per_rev={}\nrevolutions={}\n", a.frame, a.steps_per_rev,
                      format_number(a.revolutions));
  meta += fmt::format("dt_s={}\n", format_number(2.0 * kPi / (cfg->omega() * a.steps_per_rev)));
  meta += fmt::format("kernel={}\nsupport_radius_m={}\naffine={}\ngreedy_tol_m={}\n",
                      kernel_name(cfg->rbf.kernel), format_number(cfg->support_radius()),
                      cfg->rbf.affine, format_number(cfg->rbf.greedy_tol_m));
  meta += "grid_velocity=step 0 and 1 first-order backward difference (step 0 against t=-dt), "
          "BDF2 from step 2\n";
  meta += fmt::format("steps_completed={}\n", r.steps_run);
  if (!r.quality.empty()) {
    meta += fmt::format("min_orthogonality_step0_deg={}\n",
                        format_number(r.quality.front().min_orthogonality_deg));
  }
  meta += fmt::format("min_orthogonality_cycle_deg={}\n", format_number(min_orth));
  meta += fmt::format("surface_return_error_m={}\npoint_return_error_m={}\n",
                      format_number(r.surface_return_error), format_number(r.point_return_error));
  write_text_file(dir / "metadata.txt", meta);
  out << meta;

  if (r.failed) {
    err << fmt::format("error: negative volumes ({} cells) at step {}; last good step {}\n",
                       r.failed_quality.negative_volume_count, r.failed_step, r.failed_step - 1);
    return kDeformFailure;
  }
  return kOk;
}

int cmd_interface(InterfaceArgs a, std::ostream& out, std::ostream& err) {
  std::optional<Mesh> mesh;
  try {
    mesh = read_mesh_file(a.mesh);
    if (a.markers.empty() && !a.config.empty()) a.markers = load_config(a.config).interface_markers;
    if (a.markers.size() != 2) {
      err << "error: give two interface markers (--markers a,b or interface = [..] in --config)\n";
      return kUsage;
    }
    for (const auto& m : a.markers) (void)mesh->marker(m);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  }

  try {
    const InterfacePair pair = interface_face_sets(*mesh, a.markers[0], a.markers[1]);
    const Supermesh sm = build_supermesh(pair.a, pair.b);
    if (sm.faces.empty()) {
      err << fmt::format("error: markers '{}' and '{}' do not overlap\n", a.markers[0], a.markers[1]);
      return kInterfaceFailure;
    }
    const InterfaceReport rep = summarize_interface(sm, pair);
    std::string report = fmt::format("interface: {} -> {}\n", a.markers[0], a.markers[1]) + rep.text();
    report += "a_face,weight_sum,donors\n";
    for (std::size_t f = 0; f < rep.a_faces; ++f) {
      report += fmt::format("{},{},{}\n", f, format_number(sm.weight_sum(f)), sm.donors_a[f].size());
    }
    if (!a.out.empty()) {
      const fs::path dir(a.out);
      fs::create_directories(dir);
      write_text_file(dir / "supermesh.csv", sm.to_csv());
      write_text_file(dir / "supermesh.vtk", sm.to_vtk());
      write_text_file(dir / "interface_report.txt", report);
    }
    out << fmt::format("interface: {} -> {}\n", a.markers[0], a.markers[1]) << rep.text();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInterfaceFailure;
  }
  return kOk;
}

int cmd_hb(const HbArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<FrequencySet> fs;
  std::vector<double> t;
  std::optional<SpectralOperator> op;
  try {
    fs = FrequencySet::from_list(a.omega);
    const auto n = a.instances > 0 ? static_cast<std::size_t>(a.instances) : fs->count();
    t = choose_instances(*fs, n);
    op = build_operator(*fs, t);
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (fs->positive().empty()) {
    err << "error: need at least one nonzero frequency\n";
    return kUsage;
  }

  // Probe: resolved tones sum_k (sin w_k t + 0.5 cos w_k t) + 1, or an
  // arbitrary multiple of the lowest frequency.
  auto signal = [&](double tt, bool derivative) {
    if (a.probe_multiple) {
      const double w = *a.probe_multiple * fs->positive().front();
      return derivative ? w * std::cos(w * tt) : std::sin(w * tt);
    }
    double v = derivative ? 0.0 : 1.0;
    for (double w : fs->positive()) {
      v += derivative ? w * std::cos(w * tt) - 0.5 * w * std::sin(w * tt)
                      : std::sin(w * tt) + 0.5 * std::cos(w * tt);
    }
    return v;
  };
  std::vector<double> input(t.size()), exact(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    input[i] = signal(t[i], false);
    exact[i] = signal(t[i], true);
  }
  const std::vector<double> hb = op->apply(input);
  CsvWriter csv({"t", "input", "exact_derivative", "hb_derivative", "error"});
  double max_err = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = std::abs(hb[i] - exact[i]);
    max_err = std::max(max_err, e);
    csv.row(t[i], input[i], exact[i], hb[i], e);
  }
  emit(a.out, csv.str(), out);

  double row_sum = 0.0;
  for (Eigen::Index r = 0; r < op->h.rows(); ++r) row_sum = std::max(row_sum, std::abs(op->h.row(r).sum()));
  const bool resolved = !a.probe_multiple ||
                        std::any_of(fs->positive().begin(), fs->positive().end(), [&](double w) {
                          return std::abs(w - *a.probe_multiple * fs->positive().front()) <= 1e-12 * w;
                        });
  err << fmt::format("instances={} condition={} max_row_sum={} max_error={}{}\n", t.size(),
                     format_number(op->condition), format_number(row_sum), format_number(max_err),
                     resolved ? "" : " (unresolved probe tone, aliasing error measured)");
  return kOk;
}

int configure_threads(int requested, std::ostream& err) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("ROTORMESH_THREADS")) {
      try {
        n = std::stoi(env);
      } catch (const std::exception&) {
        err << "error: ROTORMESH_THREADS must be an integer\n";
        return kUsage;
      }
    }
  }
  if (n > 0) set_thread_count(n);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rotor mesh motion, interface weights and harmonic-balance operators", "rotormesh"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: ROTORMESH_THREADS or all cores)");

  InfoArgs info;
  auto* c_info = app.add_subcommand("info", "Mesh counts, markers and quality");
  c_info->add_option("mesh,--mesh", info.mesh, "Mesh file")->required();

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Blade angles and normal Mach over one revolution");
  c_sweep->add_option("--config", sweep.config, "Motion config")->required();
  c_sweep->add_option("--r-over-R", sweep.stations, "Radial stations")->delimiter(',');
  c_sweep->add_option("--steps", sweep.steps, "Azimuth steps per revolution");
  c_sweep->add_option("--out", sweep.out, "CSV output file (default stdout)");

  DeformArgs deform;
  auto* c_deform = app.add_subcommand("deform", "Deform a mesh through rotor revolutions");
  c_deform->add_option("--mesh", deform.mesh, "Mesh file")->required();
  c_deform->add_option("--config", deform.config, "Motion config")->required();
  c_deform->add_option("--blade-markers", deform.blade_markers, "Blade markers, one per blade")
      ->delimiter(',');
  c_deform->add_option("--steps-per-rev", deform.steps_per_rev, "Physical time steps per revolution");
  c_deform->add_option("--revolutions", deform.revolutions, "Revolutions to run");
  c_deform->add_option("--stride", deform.stride, "Write a VTK file every N steps (0: none)");
  c_deform->add_option("--out", deform.out, "Output directory");
  c_deform->add_option("--frame", deform.frame, "fixed (rotate grid) or hub");

  InterfaceArgs iface;
  auto* c_iface = app.add_subcommand("interface", "Supermesh weights between two markers");
  c_iface->add_option("--mesh", iface.mesh, "Mesh file")->required();
  c_iface->add_option("--markers", iface.markers, "Marker pair a,b")->delimiter(',');
  c_iface->add_option("--config", iface.config, "Config with an interface = [a, b] entry");
  c_iface->add_option("--out", iface.out, "Output directory");

  HbArgs hb;
  auto* c_hb = app.add_subcommand("hb", "Harmonic-balance derivative demo");
  c_hb->add_option("--omega", hb.omega, "Angular frequencies (rad/s)")->delimiter(',')->required();
  c_hb->add_option("--instances", hb.instances, "Number of time instances (odd)");
  c_hb->add_option("--probe-multiple", hb.probe_multiple,
                   "Probe sin(m w1 t) instead of the resolved tones");
  c_hb->add_option("--out", hb.out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (int rc = configure_threads(threads, err); rc != kOk) return rc;

  try {
    if (*c_info) return cmd_info(info, out, err);
    if (*c_sweep) return cmd_sweep(sweep, out, err);
    if (*c_deform) return cmd_deform(deform, out, err);
    if (*c_iface) return cmd_interface(iface, out, err);
    if (*c_hb) return cmd_hb(hb, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  }
  return kUsage;
}

}  // namespace rotormesh::cli
