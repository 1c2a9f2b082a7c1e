//! Self-contained SVG rendering of ROC curves.

use crate::eval::{auc, RocCurve};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 62.0;
const MARGIN_RIGHT: f64 = 18.0;
const MARGIN_TOP: f64 = 18.0;
const MARGIN_BOTTOM: f64 = 52.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

fn x_px(fpr: f64) -> f64 {
    MARGIN_LEFT + fpr * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
}

fn y_px(tpr: f64) -> f64 {
    HEIGHT - MARGIN_BOTTOM - tpr * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
}

/// Render named ROC curves over the unit square: one polyline per curve, a
/// dashed random-baseline diagonal, and a legend with each curve's AUC to
/// two decimals. Output is byte-deterministic for fixed input.
pub fn plot_roc(curves: &[(String, RocCurve)]) -> String {
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Axes with ticks every 0.25.
    svg.push_str(&format!(
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" \
         stroke=\"black\" stroke-width=\"1\"/>\n",
        x_px(0.0),
        y_px(1.0),
        x_px(1.0) - x_px(0.0),
        y_px(0.0) - y_px(1.0)
    ));
    for i in 0..=4 {
        let t = f64::from(i) / 4.0;
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            x_px(t),
            y_px(0.0),
            x_px(t),
            y_px(0.0) + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{t:.2}</text>\n",
            x_px(t),
            y_px(0.0) + 18.0
        ));
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            x_px(0.0) - 5.0,
            y_px(t),
            x_px(0.0),
            y_px(t)
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{t:.2}</text>\n",
            x_px(0.0) - 8.0,
            y_px(t) + 4.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">False Positive Rate</text>\n",
        (x_px(0.0) + x_px(1.0)) / 2.0,
        HEIGHT - 12.0
    ));
    svg.push_str(&format!(
        "<text x=\"14\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 14 {:.2})\">True Positive Rate</text>\n",
        (y_px(0.0) + y_px(1.0)) / 2.0,
        (y_px(0.0) + y_px(1.0)) / 2.0
    ));

    // Random baseline.
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"gray\" \
         stroke-dasharray=\"6 4\" class=\"baseline\"/>\n",
        x_px(0.0),
        y_px(0.0),
        x_px(1.0),
        y_px(1.0)
    ));

    for (i, (_, curve)) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = curve
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", x_px(p.fpr), y_px(p.tpr)))
            .collect();
        svg.push_str(&format!(
            "<polyline class=\"curve\" points=\"{}\" fill=\"none\" stroke=\"{color}\" \
             stroke-width=\"1.8\"/>\n",
            points.join(" ")
        ));
    }

    // Legend, lower right.
    let legend_x = x_px(1.0) - 230.0;
    let mut legend_y = y_px(0.0) - 14.0 * curves.len() as f64 - 12.0;
    for (i, (name, curve)) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{color}\" \
             stroke-width=\"1.8\"/>\n",
            legend_x,
            legend_y - 4.0,
            legend_x + 22.0,
            legend_y - 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" class=\"legend\">{} (AUC = {:.2})</text>\n",
            legend_x + 28.0,
            legend_y,
            xml_escape(name),
            auc(curve)
        ));
        legend_y += 14.0;
    }

    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::RocPoint;

    fn diagonal() -> RocCurve {
        RocCurve {
            points: vec![
                RocPoint {
                    threshold: f64::INFINITY,
                    fpr: 0.0,
                    tpr: 0.0,
                },
                RocPoint {
                    threshold: 0.5,
                    fpr: 1.0,
                    tpr: 1.0,
                },
            ],
        }
    }

    #[test]
    fn diagonal_curve_coincides_with_baseline() {
        let svg = plot_roc(&[("flat".to_string(), diagonal())]);
        assert_eq!(svg.matches("class=\"curve\"").count(), 1);
        assert!(svg.contains("flat (AUC = 0.50)"));
        // The curve polyline spans the same endpoints as the dashed baseline.
        let baseline = svg
            .lines()
            .find(|l| l.contains("baseline"))
            .unwrap()
            .to_string();
        for coord in ["62.00", "428.00"] {
            assert!(baseline.contains(coord));
        }
        let curve_line = svg.lines().find(|l| l.contains("class=\"curve\"")).unwrap();
        assert!(curve_line.contains("62.00,428.00"));
    }

    #[test]
    fn two_curves_two_legend_entries_in_order() {
        let svg = plot_roc(&[
            ("first".to_string(), diagonal()),
            ("second".to_string(), diagonal()),
        ]);
        assert_eq!(svg.matches("class=\"curve\"").count(), 2);
        let first = svg.find("first (AUC").unwrap();
        let second = svg.find("second (AUC").unwrap();
        assert!(first < second);
    }
}
