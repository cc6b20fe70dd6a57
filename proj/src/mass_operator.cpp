#include "lumplab/mass_operator.hpp"

#include <optional>
#include <variant>

namespace lumplab {

struct MassOperator::Impl {
  struct Dense {
    SymMatrix m;
    DenseCholesky fac;
  };
  struct Banded {
    BandedSPD m;
    BandedCholesky fac;
  };
  std::variant<Dense, Banded, KronOperator> v;
};

MassOperator MassOperator::dense(SymMatrix m, std::string label) {
  MassOperator op;
  DenseCholesky fac(m);
  op.impl_ = std::make_shared<Impl>(Impl{Impl::Dense{std::move(m), std::move(fac)}});
  op.label_ = std::move(label);
  return op;
}

MassOperator MassOperator::banded(BandedSPD m, std::string label) {
  MassOperator op;
  BandedCholesky fac(m);
  op.impl_ = std::make_shared<Impl>(Impl{Impl::Banded{std::move(m), std::move(fac)}});
  op.label_ = std::move(label);
  return op;
}

MassOperator MassOperator::kron(KronOperator m, std::string label) {
  if (m.term_count() != 1)
    throw DimensionMismatch("MassOperator::kron requires a single-term operator");
  MassOperator op;
  op.impl_ = std::make_shared<Impl>(Impl{std::move(m)});
  op.label_ = std::move(label);
  return op;
}

std::size_t MassOperator::dim() const {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Impl::Dense>) return x.m.dim();
        else if constexpr (std::is_same_v<T, Impl::Banded>) return x.m.dim();
        else return x.total_dim();
      },
      impl_->v);
}

Vec MassOperator::solve(const Vec& rhs) const {
  return std::visit(
      [&](const auto& x) -> Vec {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Impl::Dense>) return x.fac.solve(rhs);
        else if constexpr (std::is_same_v<T, Impl::Banded>) return x.fac.solve(rhs);
        else return x.solve(rhs);
      },
      impl_->v);
}

SymMatrix MassOperator::dense_matrix() const {
  return std::visit(
      [](const auto& x) -> SymMatrix {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Impl::Dense>) return x.m;
        else if constexpr (std::is_same_v<T, Impl::Banded>) return x.m.dense();
        else return x.materialize();
      },
      impl_->v);
}

}  // namespace lumplab
