from sketchlab.ui.heatmap import draw_n3_sweep, draw_noise_heatmap, render_heatmaps
