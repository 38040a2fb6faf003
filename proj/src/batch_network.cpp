#include "adepinn/batch_network.hpp"

namespace adepinn {

namespace {

void fourier_taylor(const Eigen::ArrayXXd& z, ActivationTaylor& o) {
  const Eigen::Index h = z.rows();
  const Eigen::Index b = z.cols();
  const Eigen::ArrayXXd s = z.sin();
  const Eigen::ArrayXXd c = z.cos();
  o.d0.resize(2 * h, b);
  o.d1.resize(2 * h, b);
  o.d2.resize(2 * h, b);
  o.d3.resize(2 * h, b);
  o.d0.topRows(h) = c;
  o.d1.topRows(h) = -s;
  o.d2.topRows(h) = -c;
  o.d3.topRows(h) = s;
  o.d0.bottomRows(h) = s;
  o.d1.bottomRows(h) = c;
  o.d2.bottomRows(h) = -s;
  o.d3.bottomRows(h) = -c;
}

struct ChannelMap {
  Eigen::Index batch;
  int first;
  std::vector<int> axes;

  int count() const { return 1 + first + static_cast<int>(axes.size()); }
  Eigen::Index start_first(int i) const { return (1 + i) * batch; }
  Eigen::Index start_second(std::size_t s) const {
    return (1 + first + static_cast<Eigen::Index>(s)) * batch;
  }
};

ChannelMap channel_map(const JetRequest& req, int k, Eigen::Index batch) {
  ChannelMap m{batch, req.first_channels(k), {}};
  if (req.order >= 2) {
    for (int a : req.second_axes) {
      if (a < 0 || a >= k) throw Error(ErrorKind::shape_mismatch, "second-derivative axis out of range");
      m.axes.push_back(a);
    }
  }
  return m;
}

}  // namespace

JetBatch batch_forward(const ParamStore& params, const Eigen::MatrixXd& points,
                       const JetRequest& request, ForwardTrace* trace) {
  const NetworkLayout& layout = params.layout();
  const int k = layout.input_dim();
  if (points.rows() != k) throw Error(ErrorKind::shape_mismatch, "points have wrong dimension");
  const Eigen::Index B = points.cols();
  const ChannelMap ch = channel_map(request, k, B);
  const Eigen::Index cols = ch.count() * B;
  const int N = layout.subnet_count();
  const Eigen::Index head = layout.head_offset();

  if (trace) {
    trace->request = request;
    trace->batch = B;
    trace->channels = ch.count();
    trace->subnets.assign(static_cast<std::size_t>(N), {});
    trace->outputs.assign(static_cast<std::size_t>(N), {});
  }

  Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(cols);
  Eigen::MatrixXd y;
  for (int n = 0; n < N; ++n) {
    const double a = layout.spec().scale_factors[static_cast<std::size_t>(n)];
    y.setZero(k, cols);
    y.leftCols(B) = a * points;
    for (int i = 0; i < ch.first; ++i) y.block(i, ch.start_first(i), 1, B).setConstant(a);

    const auto layers = layout.layers(n);
    if (trace) trace->subnets[static_cast<std::size_t>(n)].resize(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const LayerBlock& b = layers[l];
      Eigen::MatrixXd z = params.weight(b) * y;
      if (b.bias_offset >= 0) z.leftCols(B).colwise() += params.bias(b);
      const bool last = l + 1 == layers.size();
      if (last) {
        if (trace) trace->subnets[static_cast<std::size_t>(n)][l].input = std::move(y);
        y = std::move(z);
        break;
      }
      Eigen::MatrixXd zx;
      if (b.fourier) {
        zx.resize(2 * z.rows(), cols);
        zx.topRows(z.rows()) = z;
        zx.bottomRows(z.rows()) = z;
      } else {
        zx = std::move(z);
      }
      ActivationTaylor t;
      if (b.fourier) {
        fourier_taylor(zx.topRows(zx.rows() / 2).leftCols(B).array(), t);
      } else {
        activation_taylor(b.activation, zx.leftCols(B).array(), t);
      }
      Eigen::MatrixXd act(zx.rows(), cols);
      act.leftCols(B) = t.d0.matrix();
      for (int i = 0; i < ch.first; ++i) {
        act.middleCols(ch.start_first(i), B) =
            (t.d1 * zx.middleCols(ch.start_first(i), B).array()).matrix();
      }
      for (std::size_t s = 0; s < ch.axes.size(); ++s) {
        const auto zi = zx.middleCols(ch.start_first(ch.axes[s]), B).array();
        const auto zii = zx.middleCols(ch.start_second(s), B).array();
        act.middleCols(ch.start_second(s), B) = (t.d2 * zi.square() + t.d1 * zii).matrix();
      }
      if (trace) {
        LayerTrace& lt = trace->subnets[static_cast<std::size_t>(n)][l];
        lt.input = std::move(y);
        lt.pre = std::move(zx);
        lt.taylor = std::move(t);
      }
      y = std::move(act);
    }
    const double w = head >= 0 ? params.flat()[head + n] : layout.combination_weight(n);
    out += w * y.row(0);
    if (trace) trace->outputs[static_cast<std::size_t>(n)] = y.row(0);
  }
  if (head >= 0) out.leftCols(B).array() += params.flat()[head + N];

  JetBatch jets = JetBatch::zeros(k, B);
  jets.value = out.leftCols(B).transpose();
  for (int i = 0; i < ch.first; ++i) jets.grad.row(i) = out.segment(ch.start_first(i), B);
  for (std::size_t s = 0; s < ch.axes.size(); ++s) {
    jets.hess.row(ch.axes[s]) = out.segment(ch.start_second(s), B);
  }
  if (!jets.value.allFinite() || !jets.grad.allFinite() || !jets.hess.allFinite()) {
    throw Error(ErrorKind::non_finite, "network jets contain NaN or Inf");
  }
  return jets;
}

void batch_backward(const ParamStore& params, const ForwardTrace& trace, const JetBatch& adjoint,
                    Eigen::Ref<Eigen::VectorXd> grad) {
  const NetworkLayout& layout = params.layout();
  const int k = layout.input_dim();
  const Eigen::Index B = trace.batch;
  const ChannelMap ch = channel_map(trace.request, k, B);
  const Eigen::Index cols = ch.count() * B;
  const int N = layout.subnet_count();
  const Eigen::Index head = layout.head_offset();
  if (grad.size() != params.size()) throw Error(ErrorKind::shape_mismatch, "gradient size mismatch");
  if (adjoint.size() != B) throw Error(ErrorKind::shape_mismatch, "adjoint batch size mismatch");

  Eigen::RowVectorXd adj_out(cols);
  adj_out.leftCols(B) = adjoint.value.transpose();
  for (int i = 0; i < ch.first; ++i) adj_out.segment(ch.start_first(i), B) = adjoint.grad.row(i);
  for (std::size_t s = 0; s < ch.axes.size(); ++s) {
    adj_out.segment(ch.start_second(s), B) = adjoint.hess.row(ch.axes[s]);
  }

  if (head >= 0) {
    for (int n = 0; n < N; ++n) {
      grad[head + n] += adj_out.dot(trace.outputs[static_cast<std::size_t>(n)]);
    }
    grad[head + N] += adj_out.leftCols(B).sum();
  }

  Eigen::MatrixXd adj_y;
  for (int n = 0; n < N; ++n) {
    const double w = head >= 0 ? params.flat()[head + n] : layout.combination_weight(n);
    adj_y = w * adj_out;
    const auto layers = layout.layers(n);
    const auto& traces = trace.subnets[static_cast<std::size_t>(n)];
    for (std::size_t l = layers.size(); l-- > 0;) {
      const LayerBlock& b = layers[l];
      const LayerTrace& lt = traces[l];
      Eigen::MatrixXd adj_z;
      if (l + 1 == layers.size()) {
        adj_z = std::move(adj_y);
      } else {
        const ActivationTaylor& t = lt.taylor;
        const Eigen::MatrixXd& zx = lt.pre;
        Eigen::MatrixXd adj_zx(zx.rows(), cols);
        Eigen::ArrayXXd value = adj_y.leftCols(B).array() * t.d1;
        for (int i = 0; i < ch.first; ++i) {
          const auto ai = adj_y.middleCols(ch.start_first(i), B).array();
          value += ai * t.d2 * zx.middleCols(ch.start_first(i), B).array();
          adj_zx.middleCols(ch.start_first(i), B) = (ai * t.d1).matrix();
        }
        for (std::size_t s = 0; s < ch.axes.size(); ++s) {
          const int axis = ch.axes[s];
          const auto as = adj_y.middleCols(ch.start_second(s), B).array();
          const auto zi = zx.middleCols(ch.start_first(axis), B).array();
          const auto zii = zx.middleCols(ch.start_second(s), B).array();
          value += as * (t.d3 * zi.square() + t.d2 * zii);
          adj_zx.middleCols(ch.start_first(axis), B).array() += 2.0 * as * t.d2 * zi;
          adj_zx.middleCols(ch.start_second(s), B) = (as * t.d1).matrix();
        }
        adj_zx.leftCols(B) = value.matrix();
        if (b.fourier) {
          const Eigen::Index h = b.rows;
          adj_z = adj_zx.topRows(h) + adj_zx.bottomRows(h);
        } else {
          adj_z = std::move(adj_zx);
        }
      }
      Eigen::Map<Eigen::MatrixXd> gw(grad.data() + b.weight_offset, b.rows, b.cols);
      gw.noalias() += adj_z * lt.input.transpose();
      if (b.bias_offset >= 0) {
        grad.segment(b.bias_offset, b.rows) += adj_z.leftCols(B).rowwise().sum();
      }
      if (l > 0) adj_y.noalias() = params.weight(b).transpose() * adj_z;
    }
  }
}

}  // namespace adepinn
