//! Fifteen two-input functions on the unit square, each strictly increasing
//! in both arguments.

use super::{Model, ModelError};
use crate::Scalar;

#[derive(Clone, Copy)]
pub struct AnalyticalModel<T> {
    /// 1-based position in the suite.
    pub id: usize,
    pub name: &'static str,
    pub formula: &'static str,
    pub f: fn(T, T) -> T,
}

impl<T> std::fmt::Debug for AnalyticalModel<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AnalyticalModel({} {}: {})", self.id, self.name, self.formula)
    }
}

impl<T: Scalar> AnalyticalModel<T> {
    pub fn eval(&self, x1: T, x2: T) -> T {
        (self.f)(x1, x2)
    }
}

impl<T: Scalar> Model<T> for AnalyticalModel<T> {
    fn id(&self) -> String {
        self.name.to_string()
    }

    fn input_count(&self) -> usize {
        2
    }

    fn response_names(&self) -> Vec<String> {
        vec!["z".to_string()]
    }

    fn evaluate(&self, x: &[T]) -> Result<Vec<T>, ModelError> {
        if x.len() != 2 {
            return Err(ModelError::Arity { expected: 2, got: x.len() });
        }
        Ok(vec![self.eval(x[0], x[1])])
    }
}

type Entry<T> = (&'static str, &'static str, fn(T, T) -> T);

pub fn analytical_suite<T: Scalar>() -> Vec<AnalyticalModel<T>> {
    let table: [Entry<T>; 15] = [
        ("linear", "x1 + x2", |a, b| a + b),
        ("x1_dominant", "x1 + 0.01 x2", |a, b| a + T::of(0.01) * b),
        ("x2_dominant", "0.3 x1 + x2", |a, b| T::of(0.3) * a + b),
        ("quadratic", "x1^2 + x2", |a, b| a * a + b),
        ("cubic", "x1^3 + 0.5 x2", |a, b| a * a * a + T::of(0.5) * b),
        ("product", "(1 + x1)(1 + x2)", |a, b| (T::one() + a) * (T::one() + b)),
        ("exp_x1", "exp(3 x1) + x2", |a, b| (T::of(3.0) * a).exp() + b),
        ("exp_sum", "exp(x1 + 2 x2)", |a, b| (a + T::two() * b).exp()),
        ("saturating", "1 - exp(-5 x1) + 0.3 x2", |a, b| T::one() - (T::of(-5.0) * a).exp() + T::of(0.3) * b),
        ("log_sum", "ln(1 + 10 x1) + ln(1 + x2)", |a, b| (T::one() + T::of(10.0) * a).ln() + (T::one() + b).ln()),
        ("sqrt_sum", "sqrt(x1) + sqrt(x2) / 2", |a, b| a.sqrt() + b.sqrt() / T::two()),
        ("tanh_step", "tanh(10 (x1 - 0.5)) + 0.2 x2", |a, b| (T::of(10.0) * (a - T::of(0.5))).tanh() + T::of(0.2) * b),
        ("logistic_ridge", "1 / (1 + exp(-12 (x1 + x2 - 1)))", |a, b| {
            T::one() / (T::one() + (T::of(-12.0) * (a + b - T::one())).exp())
        }),
        ("bilinear", "x1 x2 + 0.1 x1 + 0.1 x2", |a, b| a * b + T::of(0.1) * a + T::of(0.1) * b),
        ("soft_max", "ln(exp(5 x1) + exp(5 x2))", |a, b| ((T::of(5.0) * a).exp() + (T::of(5.0) * b).exp()).ln()),
    ];
    table
        .into_iter()
        .enumerate()
        .map(|(i, (name, formula, f))| AnalyticalModel { id: i + 1, name, formula, f })
        .collect()
}
