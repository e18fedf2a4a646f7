import pandas as pd
from sklearn.preprocessing import OneHotEncoder
from sklearn.model_selection import train_test_split

applications = pd.read_csv('applications.csv')
categorical = applications[['region', 'product', 'channel']]

encoder = OneHotEncoder(handle_unknown='ignore')
encoder.fit(categorical)
encoded = encoder.transform(categorical)
train_rows, test_rows = train_test_split(encoded, random_state=11)
