#include "pald/proof.hpp"
#include "pald/text.hpp"

namespace pald {

namespace {

using K = Form::Kind;

// announcement-free equivalent of [a]s, with a and s already announcement-free
// except where s is itself an announcement
Form push(const Form& a, const Form& s) {
  switch (s.kind()) {
    case K::Atom:
    case K::Equiv:
      return implies(a, s);
    case K::Neg:
      return implies(a, Form::neg(push(a, s.inner())));
    case K::And:
      return Form::conj(push(a, s.left()), push(a, s.right()));
    case K::Box:
      return implies(a, Form::box(s.agent(), implies(a, push(a, s.inner()))));
    case K::Ann:
      // [a][b]t is [a & [a]b]t
      return push(Form::conj(a, push(a, s.announced())), s.inner());
    case K::Kd:
    case K::DefIs:
      break;
  }
  throw ReduceError("cannot reduce an announcement over '" + to_string(s) + "'");
}

}  // namespace

Form reduce(const Form& f) {
  switch (f.kind()) {
    case K::Atom:
    case K::Equiv:
    case K::Kd:
    case K::DefIs:
      return f;
    case K::Neg:
      return Form::neg(reduce(f.inner()));
    case K::And:
      return Form::conj(reduce(f.left()), reduce(f.right()));
    case K::Box:
      return Form::box(f.agent(), reduce(f.inner()));
    case K::Ann:
      return push(reduce(f.announced()), f.inner());
  }
  return f;
}

}  // namespace pald
