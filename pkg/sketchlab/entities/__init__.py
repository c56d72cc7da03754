from sketchlab.entities.streaming import StreamingSketcher
