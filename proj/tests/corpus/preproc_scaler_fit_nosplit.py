import numpy as np
from sklearn.preprocessing import MinMaxScaler

readings = np.loadtxt('sensor.csv', delimiter=',')

scaler = MinMaxScaler()
scaler.fit(readings)
normalized = scaler.transform(readings)
np.savetxt('normalized.csv', normalized, delimiter=',')
