#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ailsr/data.hpp"
#include "ailsr/importance.hpp"
#include "ailsr/metrics.hpp"
#include "ailsr/model.hpp"
#include "ailsr/training.hpp"

namespace py = pybind11;
using namespace ailsr;

namespace {

ImageY image_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array (h, w)");
  ImageY img(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), img.v.begin());
  return img;
}

py::array_t<double> image_to_array(const ImageY& img) {
  py::array_t<double> out({img.h, img.w});
  std::copy(img.v.begin(), img.v.end(), out.mutable_data());
  return out;
}

Tensor tensor_from_2d(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array (h, w)");
  Tensor t(1, 1, static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), t.v.begin());
  return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Adaptive importance learning for lightweight super-resolution networks";

  py::register_exception<Error>(m, "AilsrError");

  py::class_<ModelSpec>(m, "ModelSpec")
      .def(py::init([](int depth, int base_width, double ratio, int in_channels,
                       std::uint64_t seed) {
             ModelSpec s;
             s.depth = depth;
             s.base_width = base_width;
             s.ratio = ratio;
             s.in_channels = in_channels;
             s.seed = seed;
             s.validate();
             return s;
           }),
           py::arg("depth") = 20, py::arg("base_width") = 64, py::arg("ratio") = 0.0,
           py::arg("in_channels") = 1, py::arg("seed") = 0)
      .def_readonly("depth", &ModelSpec::depth)
      .def_readonly("base_width", &ModelSpec::base_width)
      .def_readonly("ratio", &ModelSpec::ratio)
      .def_readonly("in_channels", &ModelSpec::in_channels)
      .def_readonly("seed", &ModelSpec::seed)
      .def("width", &ModelSpec::width)
      .def("__repr__", [](const ModelSpec& s) {
        return "ModelSpec(depth=" + std::to_string(s.depth) +
               ", base_width=" + std::to_string(s.base_width) +
               ", ratio=" + std::to_string(s.ratio) + ", width=" + std::to_string(s.width()) + ")";
      });

  py::class_<Network>(m, "Network")
      .def_property_readonly("spec", [](const Network& n) { return n.spec; })
      .def(
          "forward",
          [](const Network& net, const py::array_t<double>& x) {
            const Tensor out = forward(net, tensor_from_2d(x));
            ImageY img(out.h, out.w);
            img.v = out.v;
            return image_to_array(img);
          },
          py::arg("x"), "Run the network on one luminance plane (2-D array, [0,1] domain).")
      .def("save",
           [](const Network& net, const std::filesystem::path& path) {
             save_checkpoint(net, path, CheckpointMeta{});
           })
      .def("num_params", [](const Network& net) { return count_params(net.spec); });

  m.def("build_network", &build_network, py::arg("spec"));
  m.def(
      "load_checkpoint",
      [](const std::filesystem::path& path) { return load_checkpoint(path).net; },
      py::arg("path"));
  m.def("count_params", &count_params, py::arg("spec"));
  m.def("count_flops", &count_flops, py::arg("spec"), py::arg("h"), py::arg("w"));

  m.def("penalty_h", &penalty_h, py::arg("w"), py::arg("w_prev"), py::arg("lambda_"),
        "Increment penalty (w - w') * (ln((w - w')/lambda) - 1).");
  m.def("importance_update", &importance_update, py::arg("w_prev"), py::arg("d"),
        py::arg("lambda_"),
        "Closed-form constrained minimizer min(1, w_prev + lambda * exp(-d)).");
  m.def(
      "update_importance_map",
      [](const py::array_t<double>& w_prev, const py::array_t<double>& losses, double lambda) {
        const ImageY w = image_from_array(w_prev);
        const ImageY d = image_from_array(losses);
        ImportanceMap map{"py", w.h, w.w, w.v, 0};
        PixelLossMap loss{"py", d.h, d.w, d.v};
        AilConfig cfg;
        cfg.lambda = lambda;
        const ImportanceMap out = update_map(map, loss, cfg);
        ImageY res(out.h, out.w);
        res.v = out.weights;
        return image_to_array(res);
      },
      py::arg("w_prev"), py::arg("losses"), py::arg("lambda_") = 0.15);
  m.def(
      "teacher_importance",
      [](const py::array_t<double>& errors, double mu0, double alpha0) {
        const ImageY e = image_from_array(errors);
        TeacherInitConfig cfg;
        cfg.mu0 = mu0;
        cfg.alpha0 = alpha0;
        const ImportanceMap out =
            importance_init_from_teacher(PixelLossMap{"py", e.h, e.w, e.v}, cfg);
        ImageY res(out.h, out.w);
        res.v = out.weights;
        return image_to_array(res);
      },
      py::arg("errors"), py::arg("mu0") = 0.01, py::arg("alpha0") = 100.0,
      "Importance from teacher reconstruction errors: z / (1 + exp((x - mu0) * alpha0)).");

  m.def(
      "psnr",
      [](const py::array_t<double>& y, const py::array_t<double>& y_hat, int shave) {
        return psnr(image_from_array(y), image_from_array(y_hat), shave);
      },
      py::arg("y"), py::arg("y_hat"), py::arg("shave") = 0);
  m.def(
      "ssim",
      [](const py::array_t<double>& y, const py::array_t<double>& y_hat, int shave) {
        return ssim(image_from_array(y), image_from_array(y_hat), shave);
      },
      py::arg("y"), py::arg("y_hat"), py::arg("shave") = 0);

  m.def(
      "bicubic_resize",
      [](const py::array_t<double>& img, double factor) {
        return image_to_array(bicubic_resize(image_from_array(img), factor));
      },
      py::arg("img"), py::arg("factor"));
  m.def(
      "degrade",
      [](const py::array_t<double>& img, int scale) {
        const TrainingPair pair = make_pair("py", image_from_array(img), scale);
        return py::make_tuple(image_to_array(pair.x), image_to_array(pair.y));
      },
      py::arg("img"), py::arg("scale") = 2,
      "Returns (x, y): the pre-upsampled bicubic input and the center-cropped target.");

  m.attr("__version__") = "0.1.0";
}
