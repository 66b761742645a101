//! `rankcorr theory`: theoretical coefficients, variance reports and
//! finite-n expected values for one model.

use serde::Serialize;

use rankcorr::asymptotics::{
    expected_r_n, expected_r_tilde, var_pearson_normal, var_r_leading,
    var_tau_fgm_from_components, var_tau_leading, VarianceReport,
};
use rankcorr::copulas::{BivariateModel, Family, TheoreticalCoefficients};
use rankcorr::Error as CoreError;

use crate::manifest::OutputContext;
use crate::render::{fixed4, sci4};
use crate::{CliError, CliResult};

#[derive(Serialize)]
struct ExpectedValues {
    n: usize,
    e_r_n: f64,
    e_r_tilde: f64,
}

#[derive(Serialize)]
struct TheoryResults {
    family: Family,
    t: f64,
    coefficients: TheoreticalCoefficients,
    variance_kendall: Option<VarianceReport>,
    /// FGM only: the same coefficient assembled from the published component
    /// moments, which the definitional quadrature reproduces.
    variance_kendall_component_form: Option<f64>,
    variance_r_new: Option<VarianceReport>,
    variance_pearson: Option<VarianceReport>,
    /// Estimators whose quadrature hit the resolution cap.
    unconverged: Vec<String>,
    expected: Option<ExpectedValues>,
}

pub fn run(ctx: &OutputContext, family: Family, t: f64, n: Option<usize>) -> CliResult<()> {
    let model = BivariateModel::new(family, t)?;
    let coefficients = model.theoretical_coefficients();

    let mut unconverged = Vec::new();
    let mut track = |name: &str, r: Result<VarianceReport, CoreError>| match r {
        Ok(report) => Some(report),
        Err(CoreError::QuadratureNotConverged { .. }) => {
            unconverged.push(name.to_string());
            None
        }
        Err(_) => None,
    };

    let variance_kendall = track("kendall", var_tau_leading(&model));
    let variance_r_new = track("r_new", var_r_leading(&model));
    let variance_pearson = match family {
        Family::Normal => var_pearson_normal(t).ok(),
        _ => None,
    };
    let variance_kendall_component_form = match family {
        Family::Fgm => Some(var_tau_fgm_from_components(t)),
        _ => None,
    };

    let expected = match n {
        Some(n) => Some(ExpectedValues {
            n,
            e_r_n: expected_r_n(&model, n)?,
            e_r_tilde: expected_r_tilde(&model, n)?,
        }),
        None => None,
    };

    let results = TheoryResults {
        family,
        t,
        coefficients,
        variance_kendall,
        variance_kendall_component_form,
        variance_r_new,
        variance_pearson,
        unconverged,
        expected,
    };

    let mut text = String::new();
    text.push_str(&format!("model     : {family} (t = {t})\n"));
    let coeff_line = |name: &str, c: Option<rankcorr::Coefficient>| match c {
        Some(c) => format!(
            "{name:<9} : {} ({})\n",
            fixed4(c.value),
            match c.method {
                rankcorr::Method::ClosedForm => "closed form",
                rankcorr::Method::Quadrature => "quadrature",
            }
        ),
        None => format!("{name:<9} : -- (undefined)\n"),
    };
    text.push_str(&coeff_line("rho", results.coefficients.rho));
    text.push_str(&coeff_line("rho_s", Some(results.coefficients.rho_s)));
    text.push_str(&coeff_line("tau", Some(results.coefficients.tau)));
    text.push_str(&coeff_line("r", Some(results.coefficients.r)));

    let report_line = |name: &str, r: &Option<VarianceReport>| match r {
        Some(rep) => {
            let how = match rep.method {
                rankcorr::Method::ClosedForm => "closed form".to_string(),
                rankcorr::Method::Quadrature => {
                    format!("quadrature, m = {}", rep.resolution.unwrap_or(0))
                }
            };
            format!("{name:<13}: {} ({how})\n", sci4(rep.leading_coeff))
        }
        None => format!("{name:<13}: not converged at the resolution cap\n"),
    };
    text.push_str(&report_line("n Var(tau_n)", &results.variance_kendall));
    if let Some(v) = results.variance_kendall_component_form {
        if (v - results
            .variance_kendall
            .map(|r| r.leading_coeff)
            .unwrap_or(v))
        .abs()
            > 1e-12
        {
            text.push_str(&format!(
                "              (component-assembled form: {})\n",
                sci4(v)
            ));
        }
    }
    text.push_str(&report_line("n Var(r_n)", &results.variance_r_new));
    if family == Family::Normal {
        text.push_str(&report_line("n Var(rho_n)", &results.variance_pearson));
    }
    if let Some(e) = &results.expected {
        text.push_str(&format!(
            "E r_n     : {} (n = {})\n",
            fixed4(e.e_r_n),
            e.n
        ));
        text.push_str(&format!("E r~_n    : {}\n", fixed4(e.e_r_tilde)));
    }

    let had_unconverged = !results.unconverged.is_empty();
    let names = results.unconverged.join(", ");
    ctx.emit("theory", &results, &text)?;
    if had_unconverged {
        return Err(CliError {
            code: 5,
            message: format!("quadrature did not converge for: {names}"),
        });
    }
    Ok(())
}
